//! Reference implementations used as test oracles. They share no code with
//! the library beyond the plain data types.
#![allow(dead_code)]

use ifs_affine::{AffineBasis, AffineMap2, IfsDocument, MapEntry, Point2, RenderDefaults};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FLOWER: [[f64; 6]; 2] = [
    [0.47, 0.30, -0.30, 0.47, 0.37, 1.74],
    [0.48, -0.29, 0.29, 0.48, -0.34, 1.75],
];

pub const MAPLE: [[f64; 6]; 4] = [
    [-0.04, 0.0, -0.23, -0.65, -0.08, 0.26],
    [0.61, 0.0, 0.0, 0.31, 0.07, 3.5],
    [0.65, 0.29, -0.3, 0.48, 0.74, 0.39],
    [0.64, -0.3, 0.16, 0.56, -0.56, 0.60],
];

pub const SIERPINSKI: [[f64; 6]; 3] = [
    [0.5, 0.0, 0.0, 0.5, 0.0, 0.0],
    [0.5, 0.0, 0.0, 0.5, 0.5, 0.0],
    [0.5, 0.0, 0.0, 0.5, 0.0, 0.5],
];

/// Gaussian elimination with partial pivoting.
pub fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    x
}

/// Barycentric coordinates by solving `T (a, b, c)ᵀ = (x, y, 1)ᵀ`.
pub fn oracle_bary(basis: &AffineBasis, p: Point2) -> [f64; 3] {
    let (a, b, c) = (basis.a, basis.b, basis.c);
    solve3(
        [[a.x, b.x, c.x], [a.y, b.y, c.y], [1.0, 1.0, 1.0]],
        [p.x, p.y, 1.0],
    )
}

pub fn oracle_point(basis: &AffineBasis, q: [f64; 3]) -> Point2 {
    Point2::new(
        q[0] * basis.a.x + q[1] * basis.b.x + q[2] * basis.c.x,
        q[0] * basis.a.y + q[1] * basis.b.y + q[2] * basis.c.y,
    )
}

/// Per-point reconversion: coordinates against `old`, re-emitted against `new`.
pub fn oracle_reconvert(old: &AffineBasis, new: &AffineBasis, p: Point2) -> Point2 {
    oracle_point(new, oracle_bary(old, p))
}

/// Chaos game on its own generator (ChaCha8, uniform map choice).
pub fn deep_chaos(maps: &[[f64; 6]], n: usize, burn_in: usize, seed: u64) -> Vec<[f64; 2]> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut x, mut y) = (0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(n);
    for k in 0..n + burn_in {
        let c = &maps[rng.gen_range(0..maps.len())];
        (x, y) = (c[0] * x + c[1] * y + c[4], c[2] * x + c[3] * y + c[5]);
        if k >= burn_in {
            out.push([x, y]);
        }
    }
    out
}

/// `[xmin, ymin, xmax, ymax]`.
pub fn bbox(points: &[[f64; 2]]) -> [f64; 4] {
    points.iter().fold(
        [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
        |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
    )
}

/// Minimal canonical simplex straight from the definition.
pub fn oracle_simplex(points: &[[f64; 2]]) -> [f64; 6] {
    let b = bbox(points);
    let leg = points
        .iter()
        .map(|p| (p[0] - b[0]) + (p[1] - b[1]))
        .fold(0.0, f64::max);
    [b[0], b[1], b[0] + leg, b[1], b[0], b[1] + leg]
}

pub fn max_vertex_distance(u: &[f64; 6], v: &[f64; 6]) -> f64 {
    (0..3)
        .map(|i| (u[2 * i] - v[2 * i]).hypot(u[2 * i + 1] - v[2 * i + 1]))
        .fold(0.0, f64::max)
}

/// Random triangle with edge lengths in `[scale/4, scale]` and a corner
/// angle in `[30°, 150°]`, anchored anywhere in `[-offset, offset]²`.
pub fn well_conditioned_basis(rng: &mut impl Rng, scale: f64, offset: f64) -> AffineBasis {
    let a = Point2::new(rng.gen_range(-offset..=offset), rng.gen_range(-offset..=offset));
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let phi = theta + rng.gen_range(30f64..150.0).to_radians();
    let r1 = rng.gen_range(scale / 4.0..=scale);
    let r2 = rng.gen_range(scale / 4.0..=scale);
    AffineBasis::new(
        a,
        a + Point2::new(r1 * theta.cos(), r1 * theta.sin()),
        a + Point2::new(r2 * phi.cos(), r2 * phi.sin()),
    )
}

/// Uniform point in the disk about the centroid that passes through the
/// farthest vertex.
pub fn point_in_bounding_disk(basis: &AffineBasis, rng: &mut impl Rng) -> Point2 {
    let center = basis.centroid();
    let radius = basis
        .vertices()
        .iter()
        .map(|v| v.distance(center))
        .fold(0.0, f64::max);
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    center + Point2::new(r * t.cos(), r * t.sin())
}

/// Largest per-coordinate deviation, scaled by `1 + |coordinate|`.
pub fn max_rel_deviation(a: &[Point2], b: &[Point2]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| {
            let dx = (p.x - q.x).abs() / (1.0 + q.x.abs());
            let dy = (p.y - q.y).abs() / (1.0 + q.y.abs());
            dx.max(dy)
        })
        .fold(0.0, f64::max)
}

pub fn max_abs_deviation(a: &[Point2], b: &[Point2]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p.x - q.x).abs().max((p.y - q.y).abs()))
        .fold(0.0, f64::max)
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub const GOLDEN_SIZE: &str = "256";

/// Render invocations whose PPM output is pinned under `tests/golden`.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let flower = data_path("flower.ifs").display().to_string();
    let maple = data_path("maple.ifs").display().to_string();
    let size = ["--width", GOLDEN_SIZE, "--height", GOLDEN_SIZE];
    let case = |args: &[&str]| args.iter().chain(&size).map(|s| s.to_string()).collect();
    vec![
        (
            "flower",
            case(&["render", "--ifs", &flower, "--points", "100000", "--seed", "42"]),
        ),
        ("maple", case(&["render", "--ifs", &maple, "--basis", "auto"])),
        (
            "maple_sheared",
            case(&[
                "render",
                "--ifs",
                &maple,
                "--basis",
                "auto",
                "--move",
                "C:+0.5,+0.0",
            ]),
        ),
    ]
}

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.ppm"))
}

/// Compares against the pinned file; `IFS_AFFINE_BLESS=1` rewrites it instead.
pub fn check_golden(name: &str, bytes: &[u8]) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("IFS_AFFINE_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, bytes).unwrap();
        return Ok(());
    }
    let pinned = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if pinned == bytes {
        Ok(())
    } else {
        let diff = pinned.iter().zip(bytes).filter(|(a, b)| a != b).count();
        Err(format!("{name}: {diff} bytes differ from {}", path.display()))
    }
}

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[String]) -> CliRun {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_ifs-affine"))
        .args(args)
        .output()
        .expect("spawn cli");
    CliRun {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs a render case into a temp file and returns the image bytes.
pub fn render_case(args: &[String], dir: &std::path::Path, file: &str) -> Vec<u8> {
    let out = dir.join(file);
    let mut full = args.to_vec();
    full.push("--out".into());
    full.push(out.display().to_string());
    let run = run_cli(&full);
    assert_eq!(run.code, 0, "{full:?}: {}", run.stderr);
    std::fs::read(out).unwrap()
}

pub fn random_float(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..5) {
        0 => rng.gen_range(-1.0..1.0),
        1 => (rng.gen_range(-100i32..100) as f64) / 100.0,
        2 => f64::from_bits(rng.gen::<u64>() >> 2) * if rng.gen() { 1.0 } else { -1.0 },
        3 => rng.gen_range(-1e6..1e6),
        _ => 0.0,
    }
}

pub fn random_document(rng: &mut ChaCha8Rng) -> IfsDocument {
    let n = rng.gen_range(1..6);
    let weighted = rng.gen_bool(0.5);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let maps = raw
        .iter()
        .map(|w| MapEntry {
            map: AffineMap2::from_coefficients(std::array::from_fn(|_| random_float(rng))).unwrap(),
            weight: weighted.then_some(w / total),
        })
        .collect();
    let name = if rng.gen_bool(0.7) {
        let words = ["fern", "leaf", "twin dragon", "maple_2", "x", "Lévy C"];
        words[rng.gen_range(0..words.len())].to_string()
    } else {
        String::new()
    };
    IfsDocument {
        name,
        maps,
        basis: rng
            .gen_bool(0.5)
            .then(|| AffineBasis::from_flat(std::array::from_fn(|_| random_float(rng)))),
        render: rng.gen_bool(0.5).then(|| RenderDefaults {
            n_points: rng.gen_range(1..10_000_000),
            burn_in: rng.gen_range(0..100),
            seed: rng.gen(),
        }),
    }
}

pub fn inject_comments(text: &str, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    for line in text.lines() {
        if rng.gen_bool(0.3) {
            out.push_str("# a comment line\n");
        }
        if rng.gen_bool(0.2) {
            out.push_str("   \n");
        }
        if rng.gen_bool(0.2) {
            out.push_str("  \t");
        }
        out.push_str(line);
        if rng.gen_bool(0.3) {
            out.push_str("   # trailing @name 1 2 3");
        }
        out.push('\n');
    }
    out
}
