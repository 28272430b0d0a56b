//! Virtual bit-plane steganography for grayscale images.
//!
//! Pixel values are re-expressed in a radix-2 number system whose plane
//! weights grow more slowly than powers of two (Fibonacci-p, prime or
//! natural-number weights). Each weight sequence yields more bit-planes
//! than the pixel bit-depth, and a secret bit written into a high virtual
//! plane changes the pixel by at most that plane's weight.
//!
//! ```
//! use vplane_core::{embed, extract, EmbedPlan, GrayImage, WeightKind};
//!
//! let cover = GrayImage::from_fn(32, 32, |x, y| (x * 7 + y * 3) as u8);
//! let plan = EmbedPlan::new(WeightKind::Prime, 10, *b"hello");
//! let out = embed(&cover, &plan).unwrap();
//! assert_eq!(extract(&out.stego, WeightKind::Prime, 8, 10).unwrap(), b"hello");
//! ```

pub mod codec;
pub mod imageio;
pub mod metrics;
pub mod numsys;
pub mod stego;
pub mod theory;

pub use codec::{CodecError, CodecMap, Representation};
pub use imageio::{read_image, write_image, GrayImage, ImageError, ImageFormat};
pub use metrics::{MetricsError, MetricsReport};
pub use numsys::{fibonacci_p, sieve_primes, NumSysError, NumberSystem, WeightKind};
pub use stego::{
    capacity, embed, embed_bits, embed_with_map, extract, extract_bits, extract_with_map,
    EmbedOutcome, EmbedPlan, Framing, StegoError,
};
pub use theory::{solve_alpha, AlphaRoot, TheoryError};
