//! Deterministic random streams.
//!
//! Every random quantity in the experiments is drawn from a ChaCha12 stream
//! whose 256-bit seed is derived by mixing the base seed with a few context
//! words (case code, stream role, replicate index). The derivation is pure
//! integer arithmetic with fixed endianness, so a given configuration
//! reproduces bit-identically on any platform.

use num_complex::Complex;
pub use rand_chacha::rand_core::RngCore;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha12Rng;

use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;

/// Stream role for the per-case coefficient draw.
pub const ALPHA_STREAM: u64 = 0;
/// Stream role for per-replicate measurement noise.
pub const NOISE_STREAM: u64 = 1;
/// Stream role for randomized matrix trials (interlacing runs).
pub const TRIAL_STREAM: u64 = 2;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a 256-bit ChaCha seed from a base seed and context words.
pub fn derive_seed(base_seed: u64, words: &[u64]) -> [u8; 32] {
    let mut state = mix64(base_seed ^ 0x6A09_E667_F3BC_C908);
    for &w in words {
        state = mix64(state.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(w));
    }
    let mut seed = [0u8; 32];
    let mut s = state;
    for chunk in seed.chunks_exact_mut(8) {
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
        chunk.copy_from_slice(&mix64(s).to_le_bytes());
    }
    seed
}

/// Deterministic substream for `(base_seed, words...)`.
pub fn substream(base_seed: u64, words: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(derive_seed(base_seed, words))
}

/// Folds an identifier string into a stream code word.
pub fn stream_code(label: &str) -> u64 {
    let mut state: u64 = 0x243F_6A88_85A3_08D3; // pi fractional bits
    for &b in label.as_bytes() {
        state = mix64(state.wrapping_add(u64::from(b)));
    }
    state
}

/// Uniform draw in (0, 1] with 53-bit resolution.
fn uniform_open_closed(rng: &mut impl RngCore) -> f64 {
    (((rng.next_u64() >> 11) + 1) as f64) * (1.0 / 9_007_199_254_740_992.0)
}

/// Uniform draw in [0, 1) with 53-bit resolution.
fn uniform_closed_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64) * (1.0 / 9_007_199_254_740_992.0)
}

/// One Box-Muller transform: a pair of independent standard normal samples.
pub fn standard_normal_pair<T: Scalar>(rng: &mut impl RngCore) -> (T, T) {
    let u1 = uniform_open_closed(rng);
    let u2 = uniform_closed_open(rng);
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (
        T::from_f64(radius * angle.cos()).expect("normal sample fits scalar"),
        T::from_f64(radius * angle.sin()).expect("normal sample fits scalar"),
    )
}

/// Circular complex Gaussian sample with `E|z|^2 = variance`: real and
/// imaginary parts independent, each of variance `variance / 2`.
pub fn complex_gaussian<T: Scalar>(rng: &mut impl RngCore, variance: T) -> Complex<T> {
    let scale = (variance / T::from_f64(2.0).unwrap()).sqrt();
    let (re, im) = standard_normal_pair::<T>(rng);
    Complex::new(re * scale, im * scale)
}

/// Matrix with independent CN(0, 1) entries; used by randomized property runs.
pub fn random_complex_matrix<T: Scalar>(
    rows: usize,
    cols: usize,
    rng: &mut impl RngCore,
) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, T::one()))
}

/// Vector with independent CN(0, 1) entries.
pub fn random_complex_vector<T: Scalar>(len: usize, rng: &mut impl RngCore) -> Vec<Complex<T>> {
    (0..len).map(|_| complex_gaussian(rng, T::one())).collect()
}
