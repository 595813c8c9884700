//! BPSK mapping and coherent ML detection.

use num_complex::Complex64;

/// Maps bit 0 to +1 and bit 1 to -1.
pub fn bpsk_modulate(bits: &[u8]) -> Vec<Complex64> {
    bits.iter().map(|&b| bpsk_symbol(b)).collect()
}

pub fn bpsk_symbol(bit: u8) -> Complex64 {
    Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0)
}

/// Returns 0 iff `Re(conj(h_hat) y) >= 0`; a zero estimate falls back to `Re(y)`.
pub fn bpsk_detect(y: Complex64, h_hat: Complex64) -> u8 {
    let metric = if h_hat == Complex64::new(0.0, 0.0) {
        y.re
    } else {
        (h_hat.conj() * y).re
    };
    u8::from(metric < 0.0)
}
