//! Acceptance criteria 1 to 10 at full sample counts, one line each.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use farpoint_cli::figures::FigureId;
use farpoint_cli::verify::{run_check, VerifyOptions};
use farpoint_service::num::fmt9;

const BIN: &str = env!("CARGO_BIN_EXE_octafar");

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("octafar-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn output(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(BIN)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

/// Figures and `--json` outputs twice through the binary, then a timed `verify --quick`.
fn determinism(dir: &Path) -> Result<String, String> {
    let mut runs: Vec<Vec<&str>> = vec![
        vec!["farpoint", "0.3", "0.1", "--json"],
        vec![
            "farpoint", "--face", "5", "0.2", "-0.3", "--json", "--oracle", "0.05",
        ],
        vec!["farpoint", "1", "0", "--json"],
        vec!["distance", "0", "0.1", "0.2", "6", "-0.3", "0.1", "--json"],
        vec!["orbit", "0.5", "0.2", "50", "--json"],
        vec!["voronoi", "0.5", "0.2165063509", "--json"],
    ];
    for id in FigureId::ALL {
        runs.push(vec!["figure", id.name()]);
    }
    for args in &runs {
        if output(args)? != output(args)? {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    for id in FigureId::ALL {
        let (a, b) = (
            dir.join(format!("{id}-a.svg")),
            dir.join(format!("{id}-b.svg")),
        );
        output(&["figure", id.name(), "--out", a.to_str().unwrap()])?;
        output(&["figure", id.name(), "--out", b.to_str().unwrap()])?;
        if std::fs::read(&a).map_err(|e| e.to_string())?
            != std::fs::read(&b).map_err(|e| e.to_string())?
        {
            return Err(format!("figure {id} differs between runs"));
        }
    }
    let report = dir.join("report.json");
    let start = Instant::now();
    let status = Command::new(BIN)
        .args(["verify", "--quick", "--out", report.to_str().unwrap()])
        .output()
        .map_err(|e| e.to_string())?
        .status;
    let secs = start.elapsed().as_secs_f64();
    if !status.success() {
        return Err(format!("verify --quick exited with {status}"));
    }
    if secs >= 60.0 {
        return Err(format!("verify --quick took {secs:.1} s"));
    }
    Ok(format!(
        "{} outputs byte-identical; verify --quick {secs:.1} s < 60 s",
        runs.len() + FigureId::ALL.len()
    ))
}

fn main() {
    let opts = VerifyOptions::default();
    let mut failed = 0;
    for id in 1..=9 {
        let c = run_check(&opts, id).unwrap();
        println!(
            "criterion {id:>2} {} {:<20} measured {} tol {} ({} samples)",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            fmt9(c.measured),
            fmt9(c.tolerance),
            c.samples
        );
        if !c.passed {
            failed += 1;
            for p in &c.parts {
                println!(
                    "    {} {}: {} {} {}",
                    if p.passed { "ok  " } else { "FAIL" },
                    p.what,
                    fmt9(p.measured),
                    p.relation.symbol(),
                    fmt9(p.tolerance)
                );
            }
        }
    }
    let dir = scratch();
    match determinism(&dir) {
        Ok(msg) => println!("criterion 10 PASS determinism         {msg}"),
        Err(msg) => {
            failed += 1;
            println!("criterion 10 FAIL determinism         {msg}");
        }
    }
    let _ = std::fs::remove_dir_all(dir);
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
