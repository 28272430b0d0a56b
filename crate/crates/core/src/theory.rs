//! Numerical checks of the growth-rate results behind the distortion
//! comparisons: the Fibonacci-p growth constant, its bounds, prime growth,
//! and per-plane worst-case curves.

use thiserror::Error;

use crate::numsys::{first_primes, NumberSystem, WeightKind};

/// Largest `p` accepted by the root finder.
pub const MAX_ALPHA_P: u32 = 128;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("p={0} is outside 1..={MAX_ALPHA_P}")]
    Parameter(u32),
    #[error(
        "newton iteration for p={p} did not converge in {iterations} steps (residual {residual:e})"
    )]
    NonConvergence {
        p: u32,
        iterations: usize,
        residual: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub start: f64,
    /// Stop once `|f(x)|` is at most this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            start: 2.0,
            tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

impl NewtonOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        NewtonOptions {
            tolerance,
            ..Self::default()
        }
    }
}

/// Root of `x^(p+1) - x^p - 1` in `(1, 2)`, the growth rate of Fibonacci-p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRoot {
    pub p: u32,
    pub alpha: f64,
    pub iterations: usize,
    pub residual: f64,
}

fn alpha_poly(p: u32, x: f64) -> (f64, f64) {
    let p = p as i32;
    let value = x.powi(p + 1) - x.powi(p) - 1.0;
    let slope = (p + 1) as f64 * x.powi(p) - p as f64 * x.powi(p - 1);
    (value, slope)
}

pub fn solve_alpha(p: u32) -> Result<AlphaRoot, TheoryError> {
    solve_alpha_with(p, NewtonOptions::default())
}

/// Newton-Raphson on `x^(p+1) - x^p - 1`. From the default start of 2.0 the
/// iterates decrease monotonically onto the root.
pub fn solve_alpha_with(p: u32, options: NewtonOptions) -> Result<AlphaRoot, TheoryError> {
    if !(1..=MAX_ALPHA_P).contains(&p) {
        return Err(TheoryError::Parameter(p));
    }
    let mut x = options.start;
    let (mut value, mut slope) = alpha_poly(p, x);
    let mut iterations = 0;
    while value.abs() > options.tolerance {
        if iterations == options.max_iterations {
            return Err(TheoryError::NonConvergence {
                p,
                iterations,
                residual: value.abs(),
            });
        }
        x -= value / slope;
        (value, slope) = alpha_poly(p, x);
        iterations += 1;
    }
    Ok(AlphaRoot {
        p,
        alpha: x,
        iterations,
        residual: value.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaClaim {
    /// `1 < a_p < 2`
    UnitInterval,
    /// `a_p > a_(p+1)`
    Decreasing,
    /// `a_(p+1) > (1 + a_p) / 2`
    Midpoint,
    /// `a_p^p < p + 1`
    PowerBound,
    /// `a_p < (p+1)^(1/p) < p^(1/(p-1)) < .. < 3^(1/2) < 2`
    RootChain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimViolation {
    pub claim: AlphaClaim,
    pub p: u32,
}

/// Checks every [`AlphaClaim`] for `p` in `1..=max_p`; empty when all hold.
pub fn alpha_claim_violations(max_p: u32) -> Result<Vec<ClaimViolation>, TheoryError> {
    let roots = (1..=max_p + 1)
        .map(|p| solve_alpha(p).map(|r| r.alpha))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = |p: u32| roots[p as usize - 1];
    let root_of = |j: u32| (j as f64 + 1.0).powf(1.0 / j as f64);

    let mut violations = Vec::new();
    let mut check = |claim, p, holds: bool| {
        if !holds {
            violations.push(ClaimViolation { claim, p });
        }
    };
    for p in 1..=max_p {
        let a = alpha(p);
        let next = alpha(p + 1);
        check(AlphaClaim::UnitInterval, p, 1.0 < a && a < 2.0);
        check(AlphaClaim::Decreasing, p, a > next);
        check(AlphaClaim::Midpoint, p, next > (1.0 + a) / 2.0);
        check(AlphaClaim::PowerBound, p, a.powi(p as i32) < p as f64 + 1.0);
        let chain_holds = a < root_of(p) && (1..p).all(|j| root_of(j + 1) < root_of(j));
        check(AlphaClaim::RootChain, p, chain_holds);
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FibBoundRow {
    pub n: usize,
    pub term: u64,
    /// `alpha^(n - p)`
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FibBoundTable {
    pub p: u32,
    pub alpha: f64,
    pub rows: Vec<FibBoundRow>,
    /// Set when `F_p(n)` overflowed `u64` before `n_max`.
    pub truncated: bool,
}

/// `F_p(n) > alpha_p^(n-p)` for `p < n <= n_max`, with the converged root.
pub fn check_fib_lower_bound(p: u32, n_max: usize) -> Result<FibBoundTable, TheoryError> {
    let alpha = solve_alpha(p)?.alpha;
    check_fib_lower_bound_with_alpha(p, n_max, alpha)
}

/// As [`check_fib_lower_bound`] with a caller-supplied growth constant.
pub fn check_fib_lower_bound_with_alpha(
    p: u32,
    n_max: usize,
    alpha: f64,
) -> Result<FibBoundTable, TheoryError> {
    if !(1..=MAX_ALPHA_P).contains(&p) {
        return Err(TheoryError::Parameter(p));
    }
    let lag = p as usize + 1;
    let mut seq: Vec<u64> = vec![1; lag.min(n_max + 1)];
    let mut rows = Vec::new();
    let mut truncated = false;
    for n in lag..=n_max {
        let Some(term) = seq[n - 1].checked_add(seq[n - lag]) else {
            truncated = true;
            break;
        };
        seq.push(term);
        let bound = alpha.powf((n - p as usize) as f64);
        rows.push(FibBoundRow {
            n,
            term,
            bound,
            holds: term as f64 > bound,
        });
    }
    Ok(FibBoundTable {
        p,
        alpha,
        rows,
        truncated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeGrowthRow {
    pub n: usize,
    pub prime: u64,
    pub n_ln_n: f64,
    pub ratio: f64,
    /// `ratio` lies inside [`PRIME_GROWTH_WINDOW`].
    pub holds: bool,
}

/// Bounds on `p_n / (n ln n)` checked at small `n`.
pub const PRIME_GROWTH_WINDOW: (f64, f64) = (0.5, 2.5);

/// `p_n / (n ln n)` for `2 <= n <= n_max`, with `p_1 = 2`.
pub fn check_prime_growth(n_max: usize) -> Vec<PrimeGrowthRow> {
    first_primes(n_max)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(i, prime)| {
            let n = i + 1;
            let n_ln_n = n as f64 * (n as f64).ln();
            let ratio = prime as f64 / n_ln_n;
            let (lo, hi) = PRIME_GROWTH_WINDOW;
            PrimeGrowthRow {
                n,
                prime,
                n_ln_n,
                ratio,
                holds: (lo..=hi).contains(&ratio),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub kind: WeightKind,
    pub plane: usize,
    pub weight: u64,
    /// Worst-case squared error for a single pixel, `W(plane)^2`.
    pub wmse_unit: f64,
    pub psnr_worst: f64,
}

/// One row per (system, plane); `planes` restricts the planes reported.
pub fn theoretical_curves(systems: &[NumberSystem], planes: Option<&[usize]>) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for system in systems {
        let peak = system.max_pixel() as f64;
        for (plane, &weight) in system.weights().iter().enumerate() {
            if planes.is_some_and(|keep| !keep.contains(&plane)) {
                continue;
            }
            let wmse_unit = (weight * weight) as f64;
            rows.push(CurveRow {
                kind: system.kind(),
                plane,
                weight,
                wmse_unit,
                psnr_worst: 10.0 * (peak * peak / wmse_unit).log10(),
            });
        }
    }
    rows
}
