//! Radix-2 number systems defined by a weight function.
//!
//! A value `D` with digits `d_{n-1} .. d_0` in a system with weights `W(i)`
//! is `D = sum(d_i * W(i))`. Plane 0 is the least significant digit. Four
//! weight functions are provided: classical powers of two, the Fibonacci-p
//! sequence, `1` followed by the primes, and the natural numbers `i + 1`.

use std::fmt;

use thiserror::Error;

/// Largest supported pixel bit-depth.
pub const MAX_BIT_DEPTH: u32 = 16;

/// Largest supported Fibonacci-p parameter.
pub const MAX_FIB_P: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumSysError {
    #[error("bit depth {0} is outside the supported range 2..={MAX_BIT_DEPTH}")]
    BitDepth(u32),
    #[error("fibonacci parameter p={0} is outside the supported range 1..={MAX_FIB_P}")]
    FibParameter(u32),
    #[error("fibonacci-{p} term {index} overflows u64")]
    Overflow { p: u32, index: usize },
    #[error(
        "{planes} planes cannot represent every value up to {max_pixel} (sum of weights is {sum})"
    )]
    TooFewPlanes {
        planes: usize,
        max_pixel: u64,
        sum: u64,
    },
}

/// The weight function of a number system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    /// `W(i) = 2^i`.
    Binary,
    /// Distinct terms of the Fibonacci-p sequence.
    FibonacciP(u32),
    /// `W(0) = 1`, `W(i)` = i-th prime.
    Prime,
    /// `W(i) = i + 1`.
    Natural,
}

impl WeightKind {
    /// Short lowercase name used in reports, e.g. `fib1` or `prime`.
    pub fn label(&self) -> String {
        match self {
            WeightKind::Binary => "binary".to_owned(),
            WeightKind::FibonacciP(p) => format!("fib{p}"),
            WeightKind::Prime => "prime".to_owned(),
            WeightKind::Natural => "natural".to_owned(),
        }
    }

    /// First `count` weights of this kind (without the plane-count rule).
    pub fn weights(&self, count: usize) -> Result<Vec<u64>, NumSysError> {
        match *self {
            WeightKind::Binary => {
                if count > 64 {
                    return Err(NumSysError::Overflow { p: 0, index: 64 });
                }
                Ok((0..count).map(|i| 1u64 << i).collect())
            }
            WeightKind::FibonacciP(p) => distinct_fibonacci(p, count),
            WeightKind::Prime => Ok(prime_weights(count)),
            WeightKind::Natural => Ok((1..=count as u64).collect()),
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A weight sequence together with the pixel bit-depth it encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberSystem {
    kind: WeightKind,
    bit_depth: u32,
    weights: Vec<u64>,
}

impl NumberSystem {
    /// Builds the system for `k`-bit pixels, choosing the plane count per kind.
    ///
    /// Binary uses `n = k`. Prime and Natural use the smallest `n` whose
    /// weights sum to at least `2^k - 1`. Fibonacci-p uses one plane per
    /// distinct sequence value not exceeding `2^k - 1`, which gives 12 planes
    /// for `p = 1, k = 8`.
    pub fn new(kind: WeightKind, bit_depth: u32) -> Result<Self, NumSysError> {
        check_bit_depth(bit_depth)?;
        let max_pixel = max_pixel_for(bit_depth);
        let weights = match kind {
            WeightKind::Binary => kind.weights(bit_depth as usize)?,
            WeightKind::FibonacciP(p) => {
                check_fib_p(p)?;
                fibonacci_weights(p, max_pixel)?
            }
            WeightKind::Prime | WeightKind::Natural => {
                let mut weights = Vec::new();
                let mut sum = 0u64;
                let mut count = 0;
                while sum < max_pixel {
                    count = (count * 2).max(8);
                    weights = kind.weights(count)?;
                    sum = weights.iter().sum();
                }
                let mut acc = 0u64;
                let n = weights
                    .iter()
                    .position(|w| {
                        acc += w;
                        acc >= max_pixel
                    })
                    .expect("sum reached max_pixel")
                    + 1;
                weights.truncate(n);
                weights
            }
        };
        Self::from_parts(kind, bit_depth, weights)
    }

    /// Builds a system with an explicit plane count, e.g. the 3-plane prime
    /// system `[1, 2, 3]` for 2-bit pixels.
    pub fn with_planes(
        kind: WeightKind,
        bit_depth: u32,
        planes: usize,
    ) -> Result<Self, NumSysError> {
        check_bit_depth(bit_depth)?;
        if let WeightKind::FibonacciP(p) = kind {
            check_fib_p(p)?;
        }
        Self::from_parts(kind, bit_depth, kind.weights(planes)?)
    }

    fn from_parts(
        kind: WeightKind,
        bit_depth: u32,
        weights: Vec<u64>,
    ) -> Result<Self, NumSysError> {
        let max_pixel = max_pixel_for(bit_depth);
        let sum = weights.iter().fold(0u64, |acc, w| acc.saturating_add(*w));
        if sum < max_pixel {
            return Err(NumSysError::TooFewPlanes {
                planes: weights.len(),
                max_pixel,
                sum,
            });
        }
        debug_assert!(weights.windows(2).all(|w| w[0] < w[1]));
        Ok(NumberSystem {
            kind,
            bit_depth,
            weights,
        })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    /// Number of (virtual) bit-planes.
    pub fn planes(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// `W(plane)`, or `None` past the top plane.
    pub fn weight(&self, plane: usize) -> Option<u64> {
        self.weights.get(plane).copied()
    }

    /// Largest pixel value, `2^k - 1`.
    pub fn max_pixel(&self) -> u64 {
        max_pixel_for(self.bit_depth)
    }

    /// Sum of all weights: the largest value any bitstring can compose to.
    pub fn max_representable(&self) -> u64 {
        self.weights.iter().sum()
    }
}

impl fmt::Display for NumberSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (k={}, n={})",
            self.kind,
            self.bit_depth,
            self.planes()
        )
    }
}

fn check_bit_depth(bit_depth: u32) -> Result<(), NumSysError> {
    if (2..=MAX_BIT_DEPTH).contains(&bit_depth) {
        Ok(())
    } else {
        Err(NumSysError::BitDepth(bit_depth))
    }
}

fn check_fib_p(p: u32) -> Result<(), NumSysError> {
    if (1..=MAX_FIB_P).contains(&p) {
        Ok(())
    } else {
        Err(NumSysError::FibParameter(p))
    }
}

fn max_pixel_for(bit_depth: u32) -> u64 {
    (1u64 << bit_depth) - 1
}

/// Primes not exceeding `limit`, in ascending order (sieve of Eratosthenes).
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            for j in (i * i..=limit).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    (2..=limit)
        .filter(|&n| !composite[n])
        .map(|n| n as u64)
        .collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1;
    let mut primes = sieve_primes(bound);
    primes.truncate(count);
    primes
}

fn prime_weights(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let mut weights = Vec::with_capacity(count);
    weights.push(1);
    weights.extend(first_primes(count - 1));
    weights
}

/// `F_p(0), .., F_p(count - 1)` where `F_p(0..=p) = 1` and
/// `F_p(n) = F_p(n - 1) + F_p(n - p - 1)`.
pub fn fibonacci_p(p: u32, count: usize) -> Result<Vec<u64>, NumSysError> {
    check_fib_p(p)?;
    let lag = p as usize + 1;
    let mut seq: Vec<u64> = Vec::with_capacity(count);
    for index in 0..count {
        let term = if index < lag {
            1
        } else {
            seq[index - 1]
                .checked_add(seq[index - lag])
                .ok_or(NumSysError::Overflow { p, index })?
        };
        seq.push(term);
    }
    Ok(seq)
}

/// Fibonacci-p terms with the leading run of 1s collapsed to one, for as
/// long as they fit in `u64`.
fn fibonacci_terms(p: u32) -> impl Iterator<Item = u64> {
    let lag = p as usize + 1;
    let mut history: Vec<u64> = Vec::new();
    std::iter::from_fn(move || {
        let index = history.len();
        let term = if index < lag {
            1
        } else {
            history[index - 1].checked_add(history[index - lag])?
        };
        history.push(term);
        Some(term)
    })
    .skip(p as usize)
}

fn distinct_fibonacci(p: u32, count: usize) -> Result<Vec<u64>, NumSysError> {
    check_fib_p(p)?;
    let weights: Vec<u64> = fibonacci_terms(p).take(count).collect();
    if weights.len() < count {
        return Err(NumSysError::Overflow {
            p,
            index: weights.len() + p as usize,
        });
    }
    Ok(weights)
}

fn fibonacci_weights(p: u32, max_pixel: u64) -> Result<Vec<u64>, NumSysError> {
    let mut weights = Vec::new();
    let mut sum = 0u64;
    for w in fibonacci_terms(p) {
        // one plane per distinct value <= max_pixel, extended if the sum falls short
        if w > max_pixel && sum >= max_pixel {
            return Ok(weights);
        }
        sum += w;
        weights.push(w);
    }
    Err(NumSysError::Overflow {
        p,
        index: weights.len() + p as usize,
    })
}
