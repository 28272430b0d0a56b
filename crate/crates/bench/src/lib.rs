//! Shared fixtures for the criterion benchmarks.

use vplane_core::GrayImage;

/// Deterministic smooth test image with mild texture.
pub fn cover(width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64 / width as f64, y as f64 / height as f64);
        let base = 128.0 + 90.0 * (fx * 6.0).sin() * (fy * 4.0).cos();
        let texture = ((x * 31 + y * 17) % 13) as f64 - 6.0;
        (base + texture).clamp(0.0, 255.0) as u8
    })
}
