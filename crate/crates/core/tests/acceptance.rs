//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vplane_core::imageio::{write_bmp, write_pgm};
use vplane_core::metrics::{histogram, relative_entropy};
use vplane_core::stego::{bytes_to_bits, embed_bits};
use vplane_core::theory::{
    alpha_claim_violations, check_fib_lower_bound_with_alpha, solve_alpha_with, NewtonOptions,
};
use vplane_core::{
    embed_with_map, extract_with_map, metrics, read_image, solve_alpha, CodecMap, Framing,
    GrayImage, NumberSystem, Representation, WeightKind,
};

type Outcome = Result<String, String>;

const FIB1: WeightKind = WeightKind::FibonacciP(1);
const FOUR: [WeightKind; 4] = [
    WeightKind::Binary,
    FIB1,
    WeightKind::Prime,
    WeightKind::Natural,
];

fn system(kind: WeightKind) -> NumberSystem {
    NumberSystem::new(kind, 8).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load_tsv(name: &str) -> Vec<(String, String)> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .map(|line| {
            let (a, b) = line.split_once('\t').expect("tab-separated row");
            (a.to_owned(), b.to_owned())
        })
        .collect()
}

fn plane_counts() -> Outcome {
    let expected = [8, 12, 15, 23];
    let got: Vec<usize> = FOUR.iter().map(|&k| system(k).planes()).collect();
    ensure(got == expected, || {
        format!("got {got:?}, want {expected:?}")
    })?;
    Ok(format!("{got:?}"))
}

fn golden_spot_rows() -> Outcome {
    let spots: [(WeightKind, &str, &[u64]); 3] = [
        (
            FIB1,
            "table1_fibonacci.tsv",
            &[0, 1, 4, 8, 10, 89, 144, 233, 255],
        ),
        (
            WeightKind::Prime,
            "table2_prime.tsv",
            &[3, 43, 64, 84, 121, 255],
        ),
        (
            WeightKind::Natural,
            "table5_natural.tsv",
            &[0, 23, 24, 45, 66, 105, 127],
        ),
    ];
    let mut checked = 0;
    let start = Instant::now();
    for (kind, file, values) in spots {
        let dump = CodecMap::build(&system(kind)).dump();
        let lines: Vec<&str> = dump.lines().collect();
        let table = load_tsv(file);
        for &v in values {
            let (value, bits) = table
                .iter()
                .find(|(value, _)| value.parse::<u64>().unwrap() == v)
                .unwrap_or_else(|| panic!("{file} has no row {v}"));
            let want = format!("{value}\t{bits}");
            ensure(lines[v as usize] == want, || {
                format!("{kind} row {v}: {:?} vs {want:?}", lines[v as usize])
            })?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{checked} rows byte-exact in {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let kinds = [
        WeightKind::Binary,
        FIB1,
        WeightKind::FibonacciP(2),
        WeightKind::FibonacciP(3),
        WeightKind::Prime,
        WeightKind::Natural,
    ];
    let mut report = Vec::new();
    for kind in kinds {
        let sys = system(kind);
        let map = CodecMap::build(&sys);
        let n = sys.planes();
        let oracle = common::brute_force_map(sys.weights(), sys.max_pixel());
        for (v, mask) in oracle.iter().enumerate() {
            let mask = mask.ok_or_else(|| format!("{kind}: oracle cannot represent {v}"))?;
            let got = map.decompose(v as u64).map_err(|e| e.to_string())?;
            ensure(*got == Representation::from_mask(mask, n), || {
                format!(
                    "{kind} value {v}: {got} vs oracle {}",
                    Representation::from_mask(mask, n)
                )
            })?;
        }
        report.push(format!("{kind}/{n}"));
    }
    Ok(format!("all 256 values for {}", report.join(" ")))
}

struct Case {
    kind: WeightKind,
    plane: usize,
    cover: GrayImage,
    stego: GrayImage,
    message: Vec<u8>,
    recovered: Vec<u8>,
}

fn round_trip_cases() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let kinds = [
        FOUR.as_slice(),
        &[WeightKind::FibonacciP(2), WeightKind::FibonacciP(3)],
    ]
    .concat();
    let maps: Vec<CodecMap> = kinds.iter().map(|&k| CodecMap::build(&system(k))).collect();
    let mut cases = Vec::with_capacity(1000);
    while cases.len() < 1000 {
        let map = &maps[rng.gen_range(0..maps.len())];
        let plane = rng.gen_range(0..map.system().planes());
        let cover = common::random_image(&mut rng, 48);
        let cap = vplane_core::capacity(&cover, map, plane).unwrap();
        if cap < 32 {
            continue;
        }
        let len = rng.gen_range(0..=((cap - 32) / 8).min(96));
        let message: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let out = embed_with_map(&cover, map, plane, &message, Framing::Header).unwrap();
        let recovered = extract_with_map(&out.stego, map, plane).unwrap();
        cases.push(Case {
            kind: map.system().kind(),
            plane,
            cover,
            stego: out.stego,
            message,
            recovered,
        });
    }
    cases
}

fn round_trip(cases: &[Case], elapsed: Duration) -> Outcome {
    let bad = cases.iter().filter(|c| c.message != c.recovered).count();
    ensure(bad == 0, || {
        format!("{bad} of {} cases differ", cases.len())
    })?;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} cases in {elapsed:.2?}", cases.len()))
}

fn distortion_bound(cases: &[Case]) -> Outcome {
    for c in cases {
        let w = system(c.kind).weight(c.plane).unwrap();
        let max_err = c
            .cover
            .pixels()
            .iter()
            .zip(c.stego.pixels())
            .map(|(&a, &b)| a.abs_diff(b) as u64)
            .max()
            .unwrap_or(0);
        let mse = metrics::mse(&c.cover, &c.stego).unwrap();
        ensure(max_err <= w && mse <= (w * w) as f64, || {
            format!(
                "{} plane {}: max error {max_err}, mse {mse} vs W={w}",
                c.kind, c.plane
            )
        })?;
    }
    Ok(format!("{} cases within W and W^2", cases.len()))
}

fn alpha_roots() -> Outcome {
    let expected = [(1, 1.618034), (2, 1.465575), (3, 1.380278), (4, 1.324718)];
    let mut got = Vec::new();
    for (p, want) in expected {
        let alpha = solve_alpha(p).map_err(|e| e.to_string())?.alpha;
        ensure((alpha - want).abs() <= 1e-5, || {
            format!("p={p}: {alpha} vs {want}")
        })?;
        got.push(format!("{alpha:.6}"));
    }
    let violations = alpha_claim_violations(64).map_err(|e| e.to_string())?;
    ensure(violations.is_empty(), || {
        format!("inequalities fail: {violations:?}")
    })?;
    Ok(format!(
        "[{}], inequalities hold for p in 1..=64",
        got.join(", ")
    ))
}

/// Rows of a transcribed bound table outside half a unit of the last printed decimal.
fn bound_mismatches(p: u32, file: &str, alpha: f64) -> Result<(usize, Vec<(usize, f64)>), String> {
    let rows = load_tsv(file);
    let table = check_fib_lower_bound_with_alpha(p, p as usize + rows.len(), alpha)
        .map_err(|e| e.to_string())?;
    ensure(table.rows.len() == rows.len(), || {
        format!("{file}: only {} rows computed", table.rows.len())
    })?;
    let mut bad = Vec::new();
    for (row, (term, bound)) in table.rows.iter().zip(&rows) {
        ensure(row.term.to_string() == *term, || {
            format!("{file} n={}: F {} vs {term}", row.n, row.term)
        })?;
        let decimals = bound.split_once('.').map_or(0, |(_, d)| d.len());
        let unit = 10f64.powi(-(decimals as i32));
        let off = (row.bound - bound.parse::<f64>().unwrap()).abs() / unit;
        if off > 0.5 {
            bad.push((row.n, off));
        }
    }
    Ok((rows.len(), bad))
}

fn fib_bound_tables() -> Outcome {
    // table 3 is exactly what a Newton solve stopped at |f| <= 1e-5 gives
    let coarse =
        solve_alpha_with(1, NewtonOptions::with_tolerance(1e-5)).map_err(|e| e.to_string())?;
    let converged = solve_alpha(2).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    let mut failed = false;
    for (name, p, file, alpha) in [
        ("table 3", 1, "table3_fib1_bound.tsv", coarse.alpha),
        ("table 4", 2, "table4_fib2_bound.tsv", converged.alpha),
    ] {
        let (total, bad) = bound_mismatches(p, file, alpha)?;
        let mut line = format!("{name} {}/{total} (alpha {alpha:?})", total - bad.len());
        if let (Some(first), Some(last)) = (bad.first(), bad.last()) {
            let worst = bad.iter().map(|&(_, off)| off).fold(0.0, f64::max);
            line += &format!(" off at n={}..={}, worst {worst:.2} units", first.0, last.0);
            failed = true;
        }
        summary.push(line);
    }
    let summary = summary.join("; ");
    if failed {
        Err(summary)
    } else {
        Ok(summary)
    }
}

fn ordering_claims() -> Outcome {
    let order = [
        WeightKind::Natural,
        WeightKind::Prime,
        FIB1,
        WeightKind::Binary,
    ];
    let systems: Vec<NumberSystem> = order.iter().map(|&k| system(k)).collect();
    let shared = systems.iter().map(NumberSystem::planes).min().unwrap();
    for l in 4..shared {
        let wmse: Vec<f64> = systems
            .iter()
            .map(|s| metrics::wmse(1, 1, s, l).unwrap())
            .collect();
        let worst: Vec<f64> = systems
            .iter()
            .map(|s| metrics::psnr_worst(s, l).unwrap())
            .collect();
        ensure(wmse.windows(2).all(|w| w[0] < w[1]), || {
            format!("plane {l}: wmse {wmse:?}")
        })?;
        ensure(worst.windows(2).all(|w| w[0] > w[1]), || {
            format!("plane {l}: psnr_worst {worst:?}")
        })?;
    }
    Ok(format!("planes 4..={}", shared - 1))
}

fn entropy_trend() -> Outcome {
    let (cover, source) = common::test_cover_512();
    let fill: Vec<bool> = bytes_to_bits(b"sandipan");
    let hist_cover = histogram(&cover);
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for kind in FOUR {
        let map = CodecMap::build(&system(kind));
        let n = map.system().planes();
        let mut values = Vec::new();
        for plane in [0, n / 2, n - 1] {
            let cap = vplane_core::capacity(&cover, &map, plane).unwrap();
            let bits: Vec<bool> = fill.iter().copied().cycle().take(cap).collect();
            let out = embed_bits(&cover, &map, plane, &bits).unwrap();
            let kl =
                relative_entropy(&hist_cover, &histogram(&out.stego)).map_err(|e| e.to_string())?;
            if !kl.is_finite() || kl < 0.0 {
                failures.push(format!("{kind} plane {plane}: {kl}"));
            }
            values.push((plane, kl));
        }
        if values.windows(2).any(|w| w[1].1 < w[0].1) {
            failures.push(format!("{kind} decreases"));
        }
        let shown: Vec<String> = values
            .iter()
            .map(|(l, kl)| format!("{l}:{kl:.4}"))
            .collect();
        lines.push(format!("{kind} {}", shown.join(" ")));
    }
    let detail = format!("{source}; {}", lines.join(", "));
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", failures.join(", ")))
    }
}

fn image_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1AE6);
    for i in 0..500 {
        let img = common::random_image(&mut rng, 37);
        for (name, write) in [
            ("pgm", write_pgm as fn(&GrayImage) -> Vec<u8>),
            ("bmp", write_bmp),
        ] {
            let bytes = write(&img);
            ensure(write(&img) == bytes, || {
                format!("image {i}: {name} writes differ")
            })?;
            let back = read_image(&bytes).map_err(|e| format!("image {i} {name}: {e}"))?;
            ensure(back == img, || {
                format!("image {i}: {name} round trip differs")
            })?;
        }
    }
    Ok("500 images, pgm and bmp".to_owned())
}

fn run(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number:>2} {name:<20} {status} [{elapsed:.2?}] {detail}");
    outcome.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= run(1, "plane counts", plane_counts);
    ok &= run(2, "golden maps", golden_spot_rows);
    ok &= run(3, "oracle equivalence", oracle_equivalence);

    let start = Instant::now();
    let cases = catch_unwind(round_trip_cases);
    let elapsed = start.elapsed();
    match &cases {
        Ok(cases) => {
            ok &= run(4, "round trip", || round_trip(cases, elapsed));
            ok &= run(5, "distortion bound", || distortion_bound(cases));
        }
        Err(_) => {
            ok &= run(4, "round trip", || {
                Err("case generation panicked".to_owned())
            });
            ok &= run(5, "distortion bound", || {
                Err("case generation panicked".to_owned())
            });
        }
    }

    ok &= run(6, "alpha roots", alpha_roots);
    ok &= run(7, "fib bound tables", fib_bound_tables);
    ok &= run(8, "ordering claims", ordering_claims);
    ok &= run(9, "entropy trend", entropy_trend);
    ok &= run(10, "image round trip", image_round_trip);
    if !ok {
        std::process::exit(1);
    }
}
