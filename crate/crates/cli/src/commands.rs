use std::io::Write;
use std::path::{Path, PathBuf};

use vplane_core::stego::{bits_to_bytes, bytes_to_bits};
use vplane_core::theory::{
    check_fib_lower_bound_with_alpha, check_prime_growth, solve_alpha_with, theoretical_curves,
    NewtonOptions,
};
use vplane_core::{
    embed_bits, embed_with_map, extract_bits, extract_with_map, read_image, write_image, CodecMap,
    Framing, GrayImage, ImageFormat, MetricsReport, NumberSystem, WeightKind,
};

use crate::fmt::{index_list, real};
use crate::{
    CapacityArgs, CliError, CompareArgs, EmbedArgs, ExtractArgs, FormatName, SystemArgs,
    SystemName, TheoryArgs,
};

const DEFAULT_MESSAGE: &[u8] = b"sandipan";

fn kind_of(args: &SystemArgs) -> WeightKind {
    match args.system {
        SystemName::Binary => WeightKind::Binary,
        SystemName::Fib => WeightKind::FibonacciP(args.p),
        SystemName::Prime => WeightKind::Prime,
        SystemName::Natural => WeightKind::Natural,
    }
}

fn parse_kind(token: &str, p: u32) -> Result<WeightKind, CliError> {
    Ok(match token {
        "binary" => WeightKind::Binary,
        "fib" => WeightKind::FibonacciP(p),
        "prime" => WeightKind::Prime,
        "natural" => WeightKind::Natural,
        t => match t.strip_prefix("fib").and_then(|n| n.parse().ok()) {
            Some(p) => WeightKind::FibonacciP(p),
            None => return Err(CliError::Usage(format!("unknown system {t:?}"))),
        },
    })
}

fn parse_kinds(list: &str, p: u32) -> Result<Vec<WeightKind>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| parse_kind(t, p))
        .collect()
}

fn build_system(args: &SystemArgs) -> Result<NumberSystem, CliError> {
    Ok(NumberSystem::new(kind_of(args), args.bits)?)
}

fn check_plane(system: &NumberSystem, plane: usize) -> Result<(), CliError> {
    if plane >= system.planes() {
        return Err(CliError::Usage(format!(
            "plane out of range 0..{}",
            system.planes() - 1
        )));
    }
    Ok(())
}

/// Relative paths that do not exist are looked up under `$STEGO_ASSETS`.
fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os("STEGO_ASSETS") {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_image(path: &Path) -> Result<GrayImage, CliError> {
    let path = resolve(path);
    read_image(&read_file(&path)?).map_err(|source| CliError::Image { path, source })
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn output_format(args: &EmbedArgs) -> Result<ImageFormat, CliError> {
    match args.format {
        Some(FormatName::Pgm) => Ok(ImageFormat::Pgm),
        Some(FormatName::Bmp) => Ok(ImageFormat::Bmp),
        None => args
            .out
            .extension()
            .and_then(|e| e.to_str())
            .and_then(ImageFormat::from_extension)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "cannot tell the format of {}; pass --format",
                    args.out.display()
                ))
            }),
    }
}

pub fn embed(args: &EmbedArgs) -> Result<(), CliError> {
    let system = build_system(&args.system)?;
    check_plane(&system, args.plane)?;
    let format = output_format(args)?;
    let cover = load_image(&args.cover)?;
    let message = read_file(&args.message)?;

    let map = CodecMap::build(&system);
    let framing = if args.raw {
        Framing::Raw
    } else {
        Framing::Header
    };
    let out = embed_with_map(&cover, &map, args.plane, &message, framing)?;
    write_file(&args.out, &write_image(&out.stego, format))?;

    let report = MetricsReport::compute(&cover, &out.stego, &system, args.plane)
        .map_err(|e| CliError::Data(e.to_string()))?;
    emit(&format!(
        "embedded={} skipped={} capacity={} mse={} psnr={}\n",
        out.bits_embedded,
        out.pixels_skipped,
        out.capacity,
        real(report.mse, 6),
        real(report.psnr, 6),
    ))
}

pub fn extract(args: &ExtractArgs) -> Result<(), CliError> {
    let system = build_system(&args.system)?;
    check_plane(&system, args.plane)?;
    let stego = load_image(&args.stego)?;
    let map = CodecMap::build(&system);
    let message = if args.raw {
        bits_to_bytes(&extract_bits(&stego, &map, args.plane)?)
    } else {
        extract_with_map(&stego, &map, args.plane)?
    };
    match &args.out {
        Some(path) => write_file(path, &message),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&message)
                .and_then(|()| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn dump_map(args: &SystemArgs) -> Result<(), CliError> {
    emit(&CodecMap::build(&build_system(args)?).dump())
}

pub fn capacity(args: &CapacityArgs) -> Result<(), CliError> {
    let system = build_system(&args.system)?;
    let planes: Vec<usize> = match args.plane {
        Some(plane) => {
            check_plane(&system, plane)?;
            vec![plane]
        }
        None => (0..system.planes()).collect(),
    };
    let cover = load_image(&args.cover)?;
    let map = CodecMap::build(&system);
    let mut csv = String::from("plane,weight,capacity\n");
    for plane in planes {
        let cap = vplane_core::capacity(&cover, &map, plane)?;
        csv += &format!("{plane},{},{cap}\n", system.weights()[plane]);
    }
    emit(&csv)
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let kinds = parse_kinds(&args.systems, args.p)?;
    let planes = match args.planes.trim() {
        "all" => None,
        spec => Some(index_list(spec).map_err(CliError::Usage)?),
    };
    let cover = load_image(&args.cover)?;
    let message = match &args.message {
        Some(path) => read_file(path)?,
        None => DEFAULT_MESSAGE.to_vec(),
    };
    let fill = bytes_to_bits(&message);

    let mut csv = String::from(
        "system,plane,weight,capacity,bits_embedded,mse,psnr,wmse,psnr_worst,rel_entropy\n",
    );
    for kind in kinds {
        let system = match NumberSystem::new(kind, args.bits) {
            Ok(system) => system,
            Err(e) => {
                eprintln!("error: {kind}: {e}");
                continue;
            }
        };
        let map = CodecMap::build(&system);
        let wanted: Vec<u64> = planes
            .clone()
            .unwrap_or_else(|| (0..system.planes() as u64).collect());
        for plane in wanted {
            match compare_row(&cover, &map, plane, &fill, args.digits) {
                Ok(row) => csv += &row,
                Err(e) => eprintln!("error: {kind} plane {plane}: {e}"),
            }
        }
    }
    emit(&csv)
}

fn compare_row(
    cover: &GrayImage,
    map: &CodecMap,
    plane: u64,
    fill: &[bool],
    digits: usize,
) -> Result<String, CliError> {
    let system = map.system();
    let plane = usize::try_from(plane).unwrap_or(usize::MAX);
    check_plane(system, plane)?;
    let cap = vplane_core::capacity(cover, map, plane)?;
    let bits: Vec<bool> = fill.iter().copied().cycle().take(cap).collect();
    let out = embed_bits(cover, map, plane, &bits)?;
    let r = MetricsReport::compute(cover, &out.stego, system, plane)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let g = |v: f64| real(v, digits);
    Ok(format!(
        "{},{plane},{},{cap},{},{},{},{},{},{}\n",
        system.kind(),
        system.weights()[plane],
        out.bits_embedded,
        g(r.mse),
        g(r.psnr),
        g(r.wmse),
        g(r.psnr_worst),
        g(r.relative_entropy),
    ))
}

pub fn theory(args: &TheoryArgs) -> Result<(), CliError> {
    let g = |v: f64| real(v, args.digits);
    let options = NewtonOptions::with_tolerance(args.tolerance);
    let ps = || -> Result<Vec<u32>, CliError> {
        index_list(&args.p)
            .map_err(CliError::Usage)?
            .into_iter()
            .map(|p| u32::try_from(p).map_err(|_| CliError::Usage(format!("p={p} is too large"))))
            .collect()
    };
    let theory_err = |e: vplane_core::TheoryError| CliError::Usage(e.to_string());

    let mut csv = String::new();
    if args.alpha {
        csv += "p,alpha,iterations,residual\n";
        for p in ps()? {
            let root = solve_alpha_with(p, options).map_err(theory_err)?;
            csv += &format!(
                "{p},{},{},{}\n",
                g(root.alpha),
                root.iterations,
                g(root.residual)
            );
        }
    } else if args.fib_bound {
        csv += "p,n,term,bound,holds\n";
        for p in ps()? {
            let alpha = solve_alpha_with(p, options).map_err(theory_err)?.alpha;
            let table =
                check_fib_lower_bound_with_alpha(p, args.n_max, alpha).map_err(theory_err)?;
            if table.truncated {
                eprintln!(
                    "note: p={p} stops at n={} where F_p(n) overflows u64",
                    table.rows.len() + p as usize
                );
            }
            for row in table.rows {
                csv += &format!(
                    "{p},{},{},{},{}\n",
                    row.n,
                    row.term,
                    g(row.bound),
                    row.holds
                );
            }
        }
    } else if args.prime_growth {
        if args.n_max < 2 {
            return Err(CliError::Usage("--n-max must be at least 2".to_owned()));
        }
        csv += "n,prime,n_ln_n,ratio,holds\n";
        for row in check_prime_growth(args.n_max) {
            csv += &format!(
                "{},{},{},{},{}\n",
                row.n,
                row.prime,
                g(row.n_ln_n),
                g(row.ratio),
                row.holds
            );
        }
    } else {
        let systems = parse_kinds(&args.systems, 1)?
            .into_iter()
            .map(|k| NumberSystem::new(k, args.bits))
            .collect::<Result<Vec<_>, _>>()?;
        let planes = match &args.planes {
            Some(spec) => Some(
                index_list(spec)
                    .map_err(CliError::Usage)?
                    .into_iter()
                    .map(|l| l as usize)
                    .collect::<Vec<_>>(),
            ),
            None => None,
        };
        csv += "system,plane,weight,wmse_unit,psnr_worst\n";
        for row in theoretical_curves(&systems, planes.as_deref()) {
            csv += &format!(
                "{},{},{},{},{}\n",
                row.kind,
                row.plane,
                row.weight,
                g(row.wmse_unit),
                g(row.psnr_worst)
            );
        }
    }
    emit(&csv)
}
