fn main() {
    std::process::exit(abmcal::cli::dispatch(std::env::args_os()));
}
