//! Embedding and extraction of a bit-stream in one virtual bit-plane.
//!
//! Pixels are visited in row-major order. A pixel carries a bit only if its
//! canonical representation stays canonical with the target plane set to
//! either value (see [`CodecMap::is_usable`]). Usability therefore depends on
//! the pixel value alone and is the same before and after embedding, so the
//! extractor finds exactly the pixels the embedder used.
//!
//! Framed streams start with a 32-bit big-endian payload bit count, followed
//! by the payload bits, MSB-first within each byte.

use thiserror::Error;

use crate::codec::{CodecError, CodecMap};
use crate::imageio::GrayImage;
use crate::numsys::{NumSysError, NumberSystem, WeightKind};

/// Width of the length header in bits.
pub const HEADER_BITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StegoError {
    #[error(transparent)]
    System(#[from] NumSysError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("message needs {required} bits but the cover has room for {available}")]
    Capacity { required: usize, available: usize },
    #[error("bit depth {0} does not fit 8-bit images")]
    BitDepth(u32),
    #[error("corrupt stream: header announces {announced} bits, only {available} remain")]
    CorruptStream { announced: u64, available: usize },
}

/// How message bits are laid out in the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Framing {
    /// Length header, then payload.
    #[default]
    Header,
    /// Payload only; embedding stops when pixels run out.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedPlan {
    pub kind: WeightKind,
    pub bit_depth: u32,
    pub plane: usize,
    pub message: Vec<u8>,
    pub framing: Framing,
}

impl EmbedPlan {
    pub fn new(kind: WeightKind, plane: usize, message: impl Into<Vec<u8>>) -> Self {
        EmbedPlan {
            kind,
            bit_depth: 8,
            plane,
            message: message.into(),
            framing: Framing::Header,
        }
    }

    pub fn raw(mut self) -> Self {
        self.framing = Framing::Raw;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedOutcome {
    pub stego: GrayImage,
    /// Channel bits written, header included.
    pub bits_embedded: usize,
    /// Unusable pixels passed over before the last bit was written.
    pub pixels_skipped: usize,
    /// Usable pixels in the whole cover.
    pub capacity: usize,
}

fn check_plane(map: &CodecMap, plane: usize) -> Result<(), StegoError> {
    let n = map.system().planes();
    if plane >= n {
        return Err(CodecError::PlaneOutOfRange { plane, max: n - 1 }.into());
    }
    Ok(())
}

fn check_image_depth(map: &CodecMap) -> Result<(), StegoError> {
    match map.system().bit_depth() {
        k if k <= 8 => Ok(()),
        k => Err(StegoError::BitDepth(k)),
    }
}

/// Per-value usability for one plane, indexed by pixel value.
fn usable_table(map: &CodecMap, plane: usize) -> Result<[bool; 256], StegoError> {
    check_plane(map, plane)?;
    let mut table = [false; 256];
    for (value, slot) in table.iter_mut().enumerate() {
        *slot = map.is_usable(value as u64, plane)?;
    }
    Ok(table)
}

/// Number of usable pixels at `plane`.
pub fn capacity(cover: &GrayImage, map: &CodecMap, plane: usize) -> Result<usize, StegoError> {
    let usable = usable_table(map, plane)?;
    Ok(cover
        .pixels()
        .iter()
        .filter(|&&v| usable[v as usize])
        .count())
}

/// Writes `bits` into `plane` of the usable pixels, best effort: stops when
/// either the bits or the pixels run out.
pub fn embed_bits(
    cover: &GrayImage,
    map: &CodecMap,
    plane: usize,
    bits: &[bool],
) -> Result<EmbedOutcome, StegoError> {
    check_image_depth(map)?;
    let usable = usable_table(map, plane)?;
    let system = map.system();
    let max_pixel = system.max_pixel();
    if let Some(&bad) = cover.pixels().iter().find(|&&v| v as u64 > max_pixel) {
        return Err(CodecError::ValueOutOfRange {
            value: bad as u64,
            max: max_pixel,
        }
        .into());
    }

    let mut stego = cover.clone();
    let mut next = bits.iter();
    let mut pending = next.next();
    let mut bits_embedded = 0;
    let mut pixels_skipped = 0;
    let mut capacity = 0;
    for px in stego.pixels_mut() {
        if !usable[*px as usize] {
            if pending.is_some() {
                pixels_skipped += 1;
            }
            continue;
        }
        capacity += 1;
        let Some(&bit) = pending else { continue };
        let rep = map.decompose(*px as u64)?;
        if rep.bit(plane) != bit {
            *px = system.compose(&rep.with_bit(plane, bit))? as u8;
        }
        bits_embedded += 1;
        pending = next.next();
    }

    Ok(EmbedOutcome {
        stego,
        bits_embedded,
        pixels_skipped,
        capacity,
    })
}

/// Reads `plane` from every usable pixel, row-major.
pub fn extract_bits(
    stego: &GrayImage,
    map: &CodecMap,
    plane: usize,
) -> Result<Vec<bool>, StegoError> {
    check_image_depth(map)?;
    let usable = usable_table(map, plane)?;
    stego
        .pixels()
        .iter()
        .filter(|&&v| usable[v as usize])
        .map(|&v| Ok(map.decompose(v as u64)?.bit(plane)))
        .collect()
}

/// Bits of `bytes`, MSB-first within each byte.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1 == 1))
        .collect()
}

/// Packs bits MSB-first; a short final byte is zero-padded.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
        })
        .collect()
}

/// Header plus payload bits.
pub fn frame(message: &[u8]) -> Vec<bool> {
    let payload_bits = message.len() as u64 * 8;
    let header = u32::try_from(payload_bits).expect("message longer than 2^32 bits");
    let mut bits = bytes_to_bits(&header.to_be_bytes());
    bits.extend(bytes_to_bits(message));
    bits
}

/// Splits a framed channel into its payload bytes.
pub fn unframe(channel: &[bool]) -> Result<Vec<u8>, StegoError> {
    if channel.len() < HEADER_BITS {
        return Err(StegoError::CorruptStream {
            announced: HEADER_BITS as u64,
            available: channel.len(),
        });
    }
    let header = bits_to_bytes(&channel[..HEADER_BITS]);
    let announced = u32::from_be_bytes([header[0], header[1], header[2], header[3]]) as u64;
    let body = &channel[HEADER_BITS..];
    if announced > body.len() as u64 {
        return Err(StegoError::CorruptStream {
            announced,
            available: body.len(),
        });
    }
    Ok(bits_to_bytes(&body[..announced as usize]))
}

/// Embeds with an already-built map.
pub fn embed_with_map(
    cover: &GrayImage,
    map: &CodecMap,
    plane: usize,
    message: &[u8],
    framing: Framing,
) -> Result<EmbedOutcome, StegoError> {
    let bits = match framing {
        Framing::Header => {
            let bits = frame(message);
            let available = capacity(cover, map, plane)?;
            if bits.len() > available {
                return Err(StegoError::Capacity {
                    required: bits.len(),
                    available,
                });
            }
            bits
        }
        Framing::Raw => bytes_to_bits(message),
    };
    embed_bits(cover, map, plane, &bits)
}

/// Builds the plan's number system and map, then embeds.
pub fn embed(cover: &GrayImage, plan: &EmbedPlan) -> Result<EmbedOutcome, StegoError> {
    let system = NumberSystem::new(plan.kind, plan.bit_depth)?;
    let map = CodecMap::build(&system);
    embed_with_map(cover, &map, plan.plane, &plan.message, plan.framing)
}

/// Recovers a framed message with an already-built map.
pub fn extract_with_map(
    stego: &GrayImage,
    map: &CodecMap,
    plane: usize,
) -> Result<Vec<u8>, StegoError> {
    unframe(&extract_bits(stego, map, plane)?)
}

/// Recovers a framed message embedded with the same kind, bit depth and plane.
pub fn extract(
    stego: &GrayImage,
    kind: WeightKind,
    bit_depth: u32,
    plane: usize,
) -> Result<Vec<u8>, StegoError> {
    let system = NumberSystem::new(kind, bit_depth)?;
    extract_with_map(stego, &CodecMap::build(&system), plane)
}
