//! Distortion and detectability statistics for cover/stego pairs.

use thiserror::Error;

use crate::codec::CodecError;
use crate::imageio::GrayImage;
use crate::numsys::NumberSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("image sizes differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("histograms differ: {0} vs {1} bins")]
    BinMismatch(usize, usize),
    #[error("histogram totals differ or are zero: {0} vs {1}")]
    BadTotals(u64, u64),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn same_size(a: &GrayImage, b: &GrayImage) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

/// Mean squared error over all pixels.
pub fn mse(cover: &GrayImage, stego: &GrayImage) -> Result<f64, MetricsError> {
    same_size(cover, stego)?;
    if cover.is_empty() {
        return Ok(0.0);
    }
    let sum: u64 = cover
        .pixels()
        .iter()
        .zip(stego.pixels())
        .map(|(&f, &g)| {
            let d = f.abs_diff(g) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / cover.len() as f64)
}

fn peak(bit_depth: u32) -> f64 {
    ((1u64 << bit_depth) - 1) as f64
}

/// `10 log10(L^2 / mse)` with `L = 2^k - 1`; infinite when `mse` is 0.
pub fn psnr_from_mse(mse: f64, bit_depth: u32) -> f64 {
    if mse == 0.0 {
        return f64::INFINITY;
    }
    let l = peak(bit_depth);
    10.0 * (l * l / mse).log10()
}

pub fn psnr(cover: &GrayImage, stego: &GrayImage, bit_depth: u32) -> Result<f64, MetricsError> {
    Ok(psnr_from_mse(mse(cover, stego)?, bit_depth))
}

fn plane_weight(system: &NumberSystem, plane: usize) -> Result<f64, MetricsError> {
    system.weight(plane).map(|w| w as f64).ok_or_else(|| {
        CodecError::PlaneOutOfRange {
            plane,
            max: system.planes() - 1,
        }
        .into()
    })
}

/// Worst-case squared error summed over the image: `w * h * W(plane)^2`.
pub fn wmse(
    width: usize,
    height: usize,
    system: &NumberSystem,
    plane: usize,
) -> Result<f64, MetricsError> {
    let w = plane_weight(system, plane)?;
    Ok((width * height) as f64 * w * w)
}

/// PSNR when every pixel's target bit flips: `10 log10(L^2 / W(plane)^2)`.
pub fn psnr_worst(system: &NumberSystem, plane: usize) -> Result<f64, MetricsError> {
    let w = plane_weight(system, plane)?;
    Ok(psnr_from_mse(w * w, system.bit_depth()))
}

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &v in img.pixels() {
        bins[v as usize] += 1;
    }
    bins
}

/// `KL(P || Q)` in bits between two histograms with equal totals `N`.
///
/// Every bin of both histograms gets `1 / N` added before normalizing, so
/// empty bins never divide by zero.
pub fn relative_entropy(p: &[u64], q: &[u64]) -> Result<f64, MetricsError> {
    if p.len() != q.len() {
        return Err(MetricsError::BinMismatch(p.len(), q.len()));
    }
    let (tp, tq) = (p.iter().sum::<u64>(), q.iter().sum::<u64>());
    if tp != tq || tp == 0 {
        return Err(MetricsError::BadTotals(tp, tq));
    }
    let eps = 1.0 / tp as f64;
    let norm = tp as f64 + eps * p.len() as f64;
    let kl = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let pa = (a as f64 + eps) / norm;
            let qb = (b as f64 + eps) / norm;
            pa * (pa / qb).log2()
        })
        .sum::<f64>();
    // rounding can leave a tiny negative for identical inputs
    Ok(kl.max(0.0))
}

/// Everything measured for one embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    pub psnr: f64,
    pub wmse: f64,
    pub psnr_worst: f64,
    pub hist_cover: [u64; 256],
    pub hist_stego: [u64; 256],
    pub relative_entropy: f64,
}

impl MetricsReport {
    pub fn compute(
        cover: &GrayImage,
        stego: &GrayImage,
        system: &NumberSystem,
        plane: usize,
    ) -> Result<Self, MetricsError> {
        let mse = mse(cover, stego)?;
        let hist_cover = histogram(cover);
        let hist_stego = histogram(stego);
        Ok(MetricsReport {
            mse,
            psnr: psnr_from_mse(mse, system.bit_depth()),
            wmse: wmse(cover.width(), cover.height(), system, plane)?,
            psnr_worst: psnr_worst(system, plane)?,
            relative_entropy: relative_entropy(&hist_cover, &hist_stego)?,
            hist_cover,
            hist_stego,
        })
    }
}
