//! Two-dimensional Sobol sequence.
//!
//! Dimension 1 is the binary van der Corput radical inverse (all direction
//! integers 1). Dimension 2 uses the standard published direction numbers
//! for the primitive polynomial x + 1: starting from m_1 = 1, the recurrence
//! m_k = 2 m_{k-1} XOR m_{k-1} yields 1, 3, 5, 15, 17, 51, 85, 255, ...
//! Points are generated in Gray-code order; the all-zero point at index 0 is
//! skipped, so the first emitted point is (0.5, 0.5).

const BITS: u32 = 52;

/// Direction vectors for one dimension, as fixed-point fractions scaled by
/// 2^BITS.
fn direction_vectors_dim2() -> [u64; BITS as usize] {
    let mut m = [0u64; BITS as usize];
    m[0] = 1;
    for k in 1..BITS as usize {
        // Degree-1 primitive polynomial recurrence.
        m[k] = (m[k - 1] << 1) ^ m[k - 1];
    }
    let mut v = [0u64; BITS as usize];
    for (k, vk) in v.iter_mut().enumerate() {
        *vk = m[k] << (BITS as usize - 1 - k);
    }
    v
}

fn direction_vectors_dim1() -> [u64; BITS as usize] {
    let mut v = [0u64; BITS as usize];
    for (k, vk) in v.iter_mut().enumerate() {
        *vk = 1u64 << (BITS as usize - 1 - k);
    }
    v
}

/// Iterator over the 2-D Sobol points, zero point skipped.
#[derive(Debug, Clone)]
pub struct Sobol2d {
    v1: [u64; BITS as usize],
    v2: [u64; BITS as usize],
    state: (u64, u64),
    index: u64,
}

impl Sobol2d {
    pub fn new() -> Self {
        Sobol2d {
            v1: direction_vectors_dim1(),
            v2: direction_vectors_dim2(),
            state: (0, 0),
            index: 0,
        }
    }
}

impl Default for Sobol2d {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Sobol2d {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        // Gray-code update: flip the direction of the lowest zero bit of the
        // running index.
        let c = self.index.trailing_ones() as usize;
        debug_assert!(c < BITS as usize, "index overflow");
        self.state.0 ^= self.v1[c];
        self.state.1 ^= self.v2[c];
        self.index += 1;
        let scale = 1.0 / (1u64 << BITS) as f64;
        Some((self.state.0 as f64 * scale, self.state.1 as f64 * scale))
    }
}

/// First `n` points of the 2-D Sobol sequence (zero point skipped).
pub fn sobol_2d(n: usize) -> Vec<(f64, f64)> {
    Sobol2d::new().take(n).collect()
}
