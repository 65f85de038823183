//! `octafar`: queries, figures, the verification suite, and the explorer server.

pub mod figures;
pub mod svg;
pub mod verify;

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use farpoint_core::farthest::distance_to_boundary_inf;
use farpoint_core::hexagon::{SHARP_VERTEX, TOP_VERTEX};
use farpoint_core::surface::{farthest_oracle, in_fundamental_domain, GeodesicField};
use farpoint_core::{Face, PlanePoint, SurfacePoint, EPS};
use farpoint_service::num::{fmt9, fmt_point, round9};
use farpoint_service::schema::{
    self, ApiError, OrbitJson, PointResponse, SurfacePointJson, VoronoiJson, SCHEMA_VERSION,
};
use serde::Serialize;

use figures::{FigureId, FigureSpec};
use verify::VerifyOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "octafar",
    version,
    about = "Farthest points on the regular octahedron"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    pub x: f64,
    pub y: f64,
    /// Read (x, y) as a point of this face and fold it into T.
    #[arg(long)]
    pub face: Option<u8>,
    /// Inputs this close to the sharp or top vertex of T are moved onto it.
    #[arg(long, default_value_t = 1e-6)]
    pub snap: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a point and print its farthest points.
    #[command(allow_negative_numbers = true)]
    Farpoint {
        #[command(flatten)]
        point: PointArgs,
        /// Also run the brute-force oracle with this grid spacing.
        #[arg(long, value_name = "H")]
        oracle: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Geodesic distance between two surface points.
    #[command(allow_negative_numbers = true)]
    Distance {
        face1: u8,
        x1: f64,
        y1: f64,
        face2: u8,
        x2: f64,
        y2: f64,
        #[arg(long)]
        json: bool,
    },
    /// Iterate the farthest-point map; `n` counts the listed points, the start included.
    #[command(allow_negative_numbers = true)]
    Orbit {
        #[command(flatten)]
        point: PointArgs,
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// The hexagon of a point and its Voronoi decomposition.
    #[command(allow_negative_numbers = true)]
    Voronoi {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        json: bool,
    },
    /// Write an SVG figure.
    #[command(allow_negative_numbers = true)]
    Figure {
        /// T-and-J, face-limit-set, J-iterates, hexagon-voronoi or plan-schematic.
        id: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Images of J drawn by J-iterates.
        #[arg(long, default_value_t = 10)]
        iterates: usize,
        /// Probe point in T for the hexagon figures.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        probe: Option<Vec<f64>>,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
    },
    /// Run the verification suite.
    Verify {
        /// Reduced sample counts for the oracle checks.
        #[arg(long)]
        quick: bool,
        /// Where the JSON report is written.
        #[arg(long, default_value = "verify-report.json")]
        out: PathBuf,
        /// Print the JSON report instead of the text summary.
        #[arg(long)]
        json: bool,
        /// Keep wall times in the JSON report.
        #[arg(long)]
        timings: bool,
    },
    /// Serve the JSON API and, optionally, a static explorer.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct CliError(pub String);

impl From<ApiError> for CliError {
    fn from(e: ApiError) -> Self {
        CliError(e.message)
    }
}

impl From<farpoint_core::GeometryError> for CliError {
    fn from(e: farpoint_core::GeometryError) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

/// The surface point named by the arguments, snapped to a special vertex when close.
pub fn resolve_point(a: &PointArgs) -> Result<SurfacePoint, CliError> {
    if !a.x.is_finite() || !a.y.is_finite() {
        return Err(CliError(format!(
            "coordinates must be finite, got ({}, {})",
            a.x, a.y
        )));
    }
    match a.face {
        Some(face) => {
            let q = schema::surface_point(face, a.x, a.y)?;
            let (t, g) = farpoint_core::surface::fold_to_fundamental(&q);
            match snap_target(t, a.snap) {
                Some(v) => Ok(g.invert().apply(&SurfacePoint::new(Face::REFERENCE, v)?)),
                None => Ok(q),
            }
        }
        None => {
            let p = PlanePoint::new(a.x, a.y);
            let p = snap_target(p, a.snap).unwrap_or(p);
            if !in_fundamental_domain(p, EPS) {
                return Err(CliError(format!(
                    "({}, {}) is not in T; pass --face to fold a surface point",
                    fmt9(a.x),
                    fmt9(a.y)
                )));
            }
            Ok(SurfacePoint::new(Face::REFERENCE, p)?)
        }
    }
}

fn snap_target(p: PlanePoint, tol: f64) -> Option<PlanePoint> {
    [SHARP_VERTEX, TOP_VERTEX]
        .into_iter()
        .find(|v| p != *v && p.dist(*v) <= tol)
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn face_point(p: &SurfacePointJson) -> String {
    format!("face {} ({}, {})", p.face, fmt9(p.x), fmt9(p.y))
}

fn json_pair(p: [f64; 2]) -> String {
    format!("({}, {})", fmt9(p[0]), fmt9(p[1]))
}

#[derive(Serialize)]
struct OracleJson {
    h: f64,
    spacing: f64,
    value: f64,
    discrepancy: f64,
    max_location_error: f64,
    clusters: Vec<SurfacePointJson>,
}

#[derive(Serialize)]
struct FarpointJson {
    #[serde(flatten)]
    point: PointResponse,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleJson>,
}

fn oracle_json(q: &SurfacePoint, h: f64, resp: &PointResponse) -> Result<OracleJson, CliError> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(CliError(format!(
            "oracle spacing must be in (0, 1], got {h}"
        )));
    }
    let o = farthest_oracle(q, h)?;
    let predicted = farpoint_core::farthest::farpoints_on_surface(q)?.points;
    let mut loc: f64 = 0.0;
    for c in &o.clusters {
        let field = GeodesicField::new(c.point);
        let mut best = f64::INFINITY;
        for p in &predicted {
            best = best.min(field.distance(p)?);
        }
        loc = loc.max(best);
    }
    Ok(OracleJson {
        h,
        spacing: round9(o.spacing),
        value: round9(o.value),
        discrepancy: round9((o.value - resp.distance).abs()),
        max_location_error: round9(loc),
        clusters: o.clusters.iter().map(|c| (&c.point).into()).collect(),
    })
}

fn cmd_farpoint(
    point: &PointArgs,
    oracle: Option<f64>,
    json: bool,
    out: &mut dyn Write,
) -> CliResult {
    let q = resolve_point(point)?;
    let resp = schema::point_response(&q, None)?;
    let oracle = oracle.map(|h| oracle_json(&q, h, &resp)).transpose()?;
    if json {
        write_json(
            out,
            &FarpointJson {
                point: resp,
                oracle,
            },
        )?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "input        {}", face_point(&resp.input))?;
    writeln!(out, "fundamental  {}", json_pair(resp.fundamental))?;
    writeln!(out, "symmetry     {}", resp.symmetry.text)?;
    writeln!(out, "region       {}", resp.region)?;
    if let Some(g) = resp.g_value {
        writeln!(out, "G            {}", fmt9(g))?;
    }
    for f in &resp.f_images {
        writeln!(out, "f            {}", json_pair(*f))?;
    }
    for f in &resp.farthest {
        let label = f.label.as_deref().unwrap_or("cone");
        writeln!(out, "farthest     {}  {label}", face_point(&f.point))?;
    }
    writeln!(out, "distance     {}", fmt9(resp.distance))?;
    if let Some(o) = oracle {
        writeln!(
            out,
            "oracle       h {}  value {}  clusters {}",
            fmt9(o.h),
            fmt9(o.value),
            o.clusters.len()
        )?;
        writeln!(
            out,
            "discrepancy  value {}  location {}",
            fmt9(o.discrepancy),
            fmt9(o.max_location_error)
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_distance(
    a: (u8, f64, f64),
    b: (u8, f64, f64),
    json: bool,
    out: &mut dyn Write,
) -> CliResult {
    let p = schema::surface_point(a.0, a.1, a.2)?;
    let q = schema::surface_point(b.0, b.1, b.2)?;
    let resp = schema::distance_response(&p, &q)?;
    if json {
        write_json(out, &resp)?;
    } else {
        writeln!(out, "from      {}", face_point(&resp.from))?;
        writeln!(out, "to        {}", face_point(&resp.to))?;
        writeln!(out, "distance  {}", fmt9(resp.distance))?;
        let faces: Vec<String> = resp.faces.iter().map(|f| f.to_string()).collect();
        writeln!(out, "faces     {}", faces.join(" "))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OrbitResponse {
    schema_version: u32,
    #[serde(flatten)]
    orbit: OrbitJson,
}

fn cmd_orbit(point: &PointArgs, n: usize, json: bool, out: &mut dyn Write) -> CliResult {
    let q = resolve_point(point)?;
    let (t, _) = farpoint_core::surface::fold_to_fundamental(&q);
    let o = schema::orbit_points(t, n)?;
    if json {
        let orbit = schema::orbit_json(&o);
        write_json(
            out,
            &OrbitResponse {
                schema_version: SCHEMA_VERSION,
                orbit,
            },
        )?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{:>5}  {:>14}  {:>14}", "k", "x", "y")?;
    for (k, p) in o.points.iter().enumerate() {
        writeln!(out, "{k:>5}  {:>14}  {:>14}", fmt9(p.x), fmt9(p.y))?;
    }
    writeln!(
        out,
        "terminated_by  {} at step {}",
        o.terminated_by.name(),
        o.iterations()
    )?;
    writeln!(out, "limit          {}", fmt_point(o.last()))?;
    writeln!(
        out,
        "distance to boundary at infinity  {}",
        fmt9(distance_to_boundary_inf(o.last()))
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VoronoiResponse {
    schema_version: u32,
    probe: [f64; 2],
    #[serde(flatten)]
    voronoi: VoronoiJson,
}

fn cmd_voronoi(point: &PointArgs, json: bool, out: &mut dyn Write) -> CliResult {
    let q = resolve_point(point)?;
    let (t, _) = farpoint_core::surface::fold_to_fundamental(&q);
    let v = schema::voronoi_json(t)?
        .ok_or_else(|| CliError("the hexagon is undefined at the sharp vertex of T".to_string()))?;
    if json {
        write_json(
            out,
            &VoronoiResponse {
                schema_version: SCHEMA_VERSION,
                probe: farpoint_service::num::pair(t),
                voronoi: v,
            },
        )?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "probe  {}", fmt_point(t))?;
    let open = |poly: &[[f64; 2]]| {
        poly[..poly.len().saturating_sub(1)]
            .iter()
            .map(|&p| json_pair(p))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "hexagon  {}", open(&v.hexagon))?;
    for c in &v.cells {
        writeln!(out, "cell {}   {}", c.index, open(&c.polygon))?;
    }
    for e in &v.essential {
        writeln!(out, "essential {:<7} {}", e.label, json_pair(e.point))?;
    }
    writeln!(out, "a0  {}", open(&v.a0))?;
    Ok(EXIT_OK)
}

fn cmd_figure(spec: &FigureSpec, path: Option<&PathBuf>, out: &mut dyn Write) -> CliResult {
    let svg = figures::render(spec)?;
    match path {
        Some(path) => {
            std::fs::write(path, svg).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        }
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(opts: &VerifyOptions, path: &PathBuf, json: bool, out: &mut dyn Write) -> CliResult {
    let report = verify::run(opts);
    let body = report.to_json(opts.timings);
    std::fs::write(path, &body).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    if json {
        out.write_all(body.as_bytes())?;
    } else {
        out.write_all(report.to_text().as_bytes())?;
        writeln!(out, "report written to {}", path.display())?;
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_serve(
    host: std::net::IpAddr,
    port: u16,
    static_dir: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    let addr = SocketAddr::new(host, port);
    writeln!(out, "serving on http://{addr}")?;
    out.flush()?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(farpoint_service::serve(addr, static_dir))?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::Farpoint {
            point,
            oracle,
            json,
        } => cmd_farpoint(point, *oracle, *json, out),
        Command::Distance {
            face1,
            x1,
            y1,
            face2,
            x2,
            y2,
            json,
        } => cmd_distance((*face1, *x1, *y1), (*face2, *x2, *y2), *json, out),
        Command::Orbit { point, n, json } => cmd_orbit(point, *n, *json, out),
        Command::Voronoi { point, json } => cmd_voronoi(point, *json, out),
        Command::Figure {
            id,
            out: path,
            samples,
            iterates,
            probe,
            width,
        } => {
            let id: FigureId = id.parse().map_err(CliError)?;
            let mut spec = FigureSpec::new(id);
            if *samples < 2 || *samples > 100_000 {
                return Err(CliError(format!(
                    "samples must be in 2..=100000, got {samples}"
                )));
            }
            if *iterates > 1000 {
                return Err(CliError(format!(
                    "iterates must be at most 1000, got {iterates}"
                )));
            }
            if !(width.is_finite() && *width >= 10.0) {
                return Err(CliError(format!("width must be at least 10, got {width}")));
            }
            spec.samples = *samples;
            spec.iterates = *iterates;
            spec.width = *width;
            if let Some(p) = probe {
                spec.probe = PlanePoint::new(p[0], p[1]);
            }
            cmd_figure(&spec, path.as_ref(), out)
        }
        Command::Verify {
            quick,
            out: path,
            json,
            timings,
        } => {
            let opts = VerifyOptions {
                quick: *quick,
                timings: *timings,
                ..VerifyOptions::default()
            };
            cmd_verify(&opts, path, *json, out)
        }
        Command::Serve {
            port,
            host,
            static_dir,
        } => cmd_serve(*host, *port, static_dir.clone(), out),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["octafar"];
        full.extend_from_slice(args);
        let code = main_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn farpoint_examples() {
        let (code, out, _) = run(&["farpoint", "0.5", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("region       RightOfJ"));
        assert!(out.contains("f            (0.666666667, 0)"));
        assert!(out.contains("distance     2.68224616"));

        let (_, out, _) = run(&["farpoint", "0.25", "0.433013"]);
        assert!(out.contains("region       TopVertex"), "{out}");
        assert!(out.contains("f            (0.25, 0.433012702)"));

        let (_, out, _) = run(&["farpoint", "1", "0"]);
        assert!(out.contains("region       SharpVertex"));
        assert!(out.contains("distance     3\n"));
    }

    #[test]
    fn orbit_examples() {
        let (code, out, _) = run(&["orbit", "0.5", "0", "4"]);
        assert_eq!(code, 0);
        let xs: Vec<&str> = out
            .lines()
            .skip(1)
            .take(4)
            .map(|l| l.split_whitespace().nth(1).unwrap())
            .collect();
        assert_eq!(xs, ["0.5", "0.666666667", "0.8", "0.888888889"]);

        let (_, out, _) = run(&["orbit", "0", "0", "10"]);
        assert!(out
            .lines()
            .skip(1)
            .take_while(|l| !l.starts_with("terminated"))
            .all(|l| l.ends_with(" 0")));

        let y = format!("{:.17}", farpoint_core::farthest::curve_j(0.245).unwrap());
        let (_, out, _) = run(&["orbit", "0.245", &y, "10"]);
        assert!(out.contains("terminated_by  hit_OnJ at step 0"), "{out}");
    }

    #[test]
    fn usage_and_domain_errors_exit_2() {
        assert_eq!(run(&["farpoint", "3", "3"]).0, 2);
        assert_eq!(run(&["farpoint", "0.5", "-0.1"]).0, 2);
        assert_eq!(run(&["farpoint", "--face", "9", "0", "0"]).0, 2);
        assert_eq!(run(&["orbit", "0.5", "0", "0"]).0, 2);
        assert_eq!(run(&["figure", "nope"]).0, 2);
        assert_eq!(run(&["bogus"]).0, 2);
        assert_eq!(run(&["voronoi", "1", "0"]).0, 2);
        let (code, _, err) = run(&["figure", "T-and-J", "--out", "/nonexistent-dir/x.svg"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent-dir/x.svg"));
    }

    #[test]
    fn face_inputs_fold() {
        let (code, out, _) = run(&["farpoint", "--face", "7", "-0.5", "0.2", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["input"]["face"], 7);
        assert!(v.get("oracle").is_none());
        let (code, out, _) = run(&["distance", "0", "1", "0", "7", "1", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("distance  3\n"));
    }
}
