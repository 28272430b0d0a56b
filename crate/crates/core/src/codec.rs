//! Canonical value <-> bitstring maps.
//!
//! Most weight sequences are redundant: several bitstrings compose to the
//! same value. The canonical representation of a value is the
//! lexicographically highest bitstring (top plane read first) among those
//! that compose to it. Only canonical bitstrings are valid.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numsys::NumberSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("value {value} is outside the pixel range 0..={max}")]
    ValueOutOfRange { value: u64, max: u64 },
    #[error("plane {plane} is out of range 0..={max}")]
    PlaneOutOfRange { plane: usize, max: usize },
    #[error("representation has {got} planes, system has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid bitstring character {0:?}")]
    BadDigit(char),
}

/// An n-digit binary string; index `i` is plane `i` (plane 0 = LSB).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    planes: usize,
    words: Vec<u64>,
}

impl Representation {
    pub fn zeros(planes: usize) -> Self {
        Representation {
            planes,
            words: vec![0; planes.div_ceil(64)],
        }
    }

    /// Builds from the low `planes` bits of `mask`.
    pub fn from_mask(mask: u64, planes: usize) -> Self {
        let mut rep = Self::zeros(planes);
        for i in (0..planes.min(64)).filter(|i| mask >> i & 1 == 1) {
            rep.set(i, true);
        }
        rep
    }

    /// Builds from bits listed plane 0 first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut rep = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            rep.set(i, b);
        }
        rep
    }

    /// Number of planes.
    pub fn len(&self) -> usize {
        self.planes
    }

    pub fn is_empty(&self) -> bool {
        self.planes == 0
    }

    pub fn bit(&self, plane: usize) -> bool {
        assert!(plane < self.planes, "plane {plane} out of range");
        self.words[plane / 64] >> (plane % 64) & 1 == 1
    }

    pub fn set(&mut self, plane: usize, value: bool) {
        assert!(plane < self.planes, "plane {plane} out of range");
        let mask = 1u64 << (plane % 64);
        if value {
            self.words[plane / 64] |= mask;
        } else {
            self.words[plane / 64] &= !mask;
        }
    }

    /// Copy with `plane` forced to `value`.
    pub fn with_bit(&self, plane: usize, value: bool) -> Self {
        let mut rep = self.clone();
        rep.set(plane, value);
        rep
    }

    /// Indices of the set planes, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.planes).filter(move |&i| self.bit(i))
    }

    /// Bits plane 0 first.
    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.planes).map(|i| self.bit(i)).collect()
    }
}

impl Ord for Representation {
    /// Lexicographic, reading the top plane first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.planes
            .cmp(&other.planes)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Representation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Representation {
    /// MSB-first, as printed in decomposition tables.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.planes)
            .rev()
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({self})")
    }
}

impl FromStr for Representation {
    type Err = CodecError;

    /// Parses an MSB-first string of `0`/`1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let planes = s.chars().count();
        let mut rep = Self::zeros(planes);
        for (i, c) in s.chars().rev().enumerate() {
            match c {
                '0' => {}
                '1' => rep.set(i, true),
                other => return Err(CodecError::BadDigit(other)),
            }
        }
        Ok(rep)
    }
}

impl NumberSystem {
    /// Weighted sum of the set planes. Any bitstring composes, canonical or not.
    pub fn compose(&self, rep: &Representation) -> Result<u64, CodecError> {
        if rep.len() != self.planes() {
            return Err(CodecError::LengthMismatch {
                expected: self.planes(),
                got: rep.len(),
            });
        }
        Ok(rep.ones().map(|i| self.weights()[i]).sum())
    }
}

/// Dense canonical map for every pixel value `0..=2^k - 1`.
#[derive(Debug, Clone)]
pub struct CodecMap {
    system: NumberSystem,
    table: Vec<Representation>,
}

impl CodecMap {
    /// Builds the canonical map.
    ///
    /// `reach[i]` records which remainders the planes below `i` can compose.
    /// Walking from the top plane down, a plane is set whenever the remainder
    /// left after taking its weight can still be completed, which yields the
    /// lexicographic maximum.
    pub fn build(system: &NumberSystem) -> Self {
        let max = system.max_pixel() as usize;
        let n = system.planes();
        let weights = system.weights();

        let mut reach = Vec::with_capacity(n);
        let mut current = Reachable::singleton(max + 1);
        for &w in weights {
            let next = current.with_shifted(w as usize);
            reach.push(current);
            current = next;
        }

        let table = (0..=max)
            .map(|value| {
                let mut rep = Representation::zeros(n);
                let mut rem = value;
                for plane in (0..n).rev() {
                    let w = weights[plane] as usize;
                    if w <= rem && reach[plane].contains(rem - w) {
                        rep.set(plane, true);
                        rem -= w;
                    }
                }
                debug_assert_eq!(rem, 0, "value {value} unrepresentable");
                rep
            })
            .collect();

        CodecMap {
            system: system.clone(),
            table,
        }
    }

    pub fn system(&self) -> &NumberSystem {
        &self.system
    }

    /// Canonical representation of `value`.
    pub fn decompose(&self, value: u64) -> Result<&Representation, CodecError> {
        self.table
            .get(value as usize)
            .filter(|_| value <= self.system.max_pixel())
            .ok_or(CodecError::ValueOutOfRange {
                value,
                max: self.system.max_pixel(),
            })
    }

    /// True iff `rep` is the canonical representation of some pixel value.
    pub fn is_valid(&self, rep: &Representation) -> bool {
        match self.system.compose(rep) {
            Ok(value) => self.decompose(value).is_ok_and(|canon| canon == rep),
            Err(_) => false,
        }
    }

    /// True iff forcing `plane` to 0 and to 1 both leave `value`'s
    /// representation canonical. Values outside the pixel range are unusable.
    pub fn is_usable(&self, value: u64, plane: usize) -> Result<bool, CodecError> {
        let weight = self
            .system
            .weight(plane)
            .ok_or(CodecError::PlaneOutOfRange {
                plane,
                max: self.system.planes() - 1,
            })?;
        let Ok(rep) = self.decompose(value) else {
            return Ok(false);
        };
        let flipped = if rep.bit(plane) {
            value - weight
        } else {
            value + weight
        };
        // the representation with the bit already at its current value is canonical
        Ok(self
            .decompose(flipped)
            .is_ok_and(|other| *other == rep.with_bit(plane, !rep.bit(plane))))
    }

    /// Iterates `(value, representation)` in ascending value order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &Representation)> {
        self.table.iter().enumerate().map(|(v, r)| (v as u64, r))
    }

    /// Text dump, one `VALUE\tBITSTRING` line per value, MSB-first.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.table.len() * (self.system.planes() + 6));
        for (value, rep) in self.entries() {
            out.push_str(&format!("{value}\t{rep}\n"));
        }
        out
    }
}

/// Fixed-size bitset over `0..len`.
#[derive(Debug, Clone)]
struct Reachable {
    len: usize,
    words: Vec<u64>,
}

impl Reachable {
    fn singleton(len: usize) -> Self {
        let mut words = vec![0; len.div_ceil(64)];
        words[0] = 1;
        Reachable { len, words }
    }

    fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self | (self << shift)`, truncated to `len`.
    fn with_shifted(&self, shift: usize) -> Self {
        let mut out = self.clone();
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        for dst in (word_shift..self.words.len()).rev() {
            let src = dst - word_shift;
            let mut w = self.words[src] << bit_shift;
            if bit_shift > 0 && src > 0 {
                w |= self.words[src - 1] >> (64 - bit_shift);
            }
            out.words[dst] |= w;
        }
        let tail = self.len % 64;
        if tail > 0 {
            *out.words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        out
    }
}
