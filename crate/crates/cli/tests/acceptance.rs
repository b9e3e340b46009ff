//! Runs the full report through the binary and prints one line per criterion.

use std::process::{Command, ExitCode};

use serde_json::Value;

fn paper_report() -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_solvkit"))
        .args(["paper-report", "--no-timings"])
        .env_remove("SOLVKIT_SEED")
        .output()
        .expect("run solvkit");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 report"))
}

fn main() -> ExitCode {
    let (code, first) = paper_report();
    let report: Value = match serde_json::from_str(&first) {
        Ok(v) => v,
        Err(e) => {
            println!("FAIL report is not JSON: {e}");
            return ExitCode::FAILURE;
        }
    };
    let verdicts = report["verdicts"].as_array().cloned().unwrap_or_default();

    let (_, second) = paper_report();
    let reproducible = first == second;

    let mut failed = 0;
    for (n, v) in verdicts.iter().enumerate() {
        let id = v["check_id"].as_str().unwrap_or("?");
        let mut ok = v["status"] == "pass";
        if id == solvkit_cli::criteria::DETERMINISM_ID {
            ok &= reproducible;
        }
        if !ok {
            failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        match v.get("witness") {
            Some(w) if !ok => println!("{tag} criterion {}: {id} {w}", n + 1),
            _ => println!("{tag} criterion {}: {id}", n + 1),
        }
    }
    if verdicts.len() != 10 {
        println!("FAIL expected 10 criteria, found {}", verdicts.len());
        failed += 1;
    }
    if !reproducible {
        println!("FAIL two runs of paper-report differ");
    }
    if code != 0 && failed == 0 {
        println!("FAIL paper-report exited with {code}");
        failed += 1;
    }
    println!("{} of {} criteria passed", verdicts.len() - failed.min(verdicts.len()), verdicts.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
