#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vplane_core::{read_image, GrayImage, Representation};

/// Lexicographic-max representation of every value in `0..=max_value`,
/// found by enumerating all `2^n` bitstrings. Bit `i` of a mask is plane `i`,
/// so the numerically largest mask is the lexicographic maximum.
pub fn brute_force_map(weights: &[u64], max_value: u64) -> Vec<Option<u64>> {
    let n = weights.len();
    assert!(n <= 26, "enumeration of 2^{n} strings is too large");
    let mut best: Vec<Option<u64>> = vec![None; max_value as usize + 1];
    // walk masks in increasing order; a later mask with the same value wins
    let mut sums = vec![0u64; 1usize << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    for (mask, &value) in sums.iter().enumerate() {
        if value <= max_value {
            best[value as usize] = Some(mask as u64);
        }
    }
    best
}

pub fn rep_of(mask: u64, planes: usize) -> Representation {
    Representation::from_mask(mask, planes)
}

/// Deterministic 8-bit test picture: smooth shading, a few soft blobs and
/// sensor-like noise, covering most of the gray range.
pub fn synthetic_cover(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.05..0.3),
                rng.gen_range(-90.0..90.0),
            )
        })
        .collect();
    GrayImage::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64 / width as f64, y as f64 / height as f64);
        let mut v = 255.0 * (0.15 + 0.7 * fx) * (1.0 - 0.3 * fy) + 35.0 * (fy * 9.0).sin()
            - 30.0 * (1.0 - fx) * fy;
        for &(cx, cy, r, amp) in &blobs {
            let d2 = (fx - cx).powi(2) + (fy - cy).powi(2);
            v += amp * (-d2 / (r * r)).exp();
        }
        v += rng.gen_range(-4.0..4.0);
        v.round().clamp(0.0, 255.0) as u8
    })
}

/// The 512x512 cover: `$STEGO_ASSETS/lena.pgm` (or `.bmp`) when present,
/// otherwise the synthetic picture.
pub fn test_cover_512() -> (GrayImage, String) {
    if let Ok(dir) = std::env::var("STEGO_ASSETS") {
        for name in ["lena.pgm", "lena.bmp"] {
            let path = std::path::Path::new(&dir).join(name);
            if let Ok(bytes) = std::fs::read(&path) {
                let img = read_image(&bytes).expect("asset decodes");
                return (img, path.display().to_string());
            }
        }
    }
    (
        synthetic_cover(512, 512, 0x5EED),
        "synthetic 512x512".to_owned(),
    )
}

pub fn random_image(rng: &mut impl Rng, max_side: usize) -> GrayImage {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let pixels = (0..w * h).map(|_| rng.gen()).collect();
    GrayImage::new(w, h, pixels).unwrap()
}
