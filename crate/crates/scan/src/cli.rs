//! Argument parsing and dispatch for the `ccr-scan` binary. Output streams
//! are passed in so the whole command line can be driven in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::emit::{emit, rows, write_table};
use crate::{run_sweep, run_verify, Format, ScanError, SweepConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

/// Sweep noisy-channel grids and check the complementarity identities.
#[derive(Parser)]
#[command(name = "ccr-scan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every (channel, x, p) point and write a CSV or JSON table.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// csv or json
        #[arg(long)]
        format: Option<Format>,
        /// Output file; stdout when omitted or `-`.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the invariant suite; exits 1 if any residual exceeds the tolerance.
    Verify {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// Flags override values read from `--config`.
#[derive(Args)]
struct GridArgs {
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated: adc,cadc,pdc,bfc,pfc,bpfc,dc or all.
    #[arg(long)]
    channels: Option<String>,
    /// Comma-separated initial-state amplitudes in [0, 1].
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_stop: Option<f64>,
    #[arg(long)]
    p_count: Option<usize>,
    /// Memory parameter of correlated amplitude damping.
    #[arg(long)]
    mu: Option<f64>,
}

impl GridArgs {
    fn config(&self) -> Result<SweepConfig, ScanError> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::from_file(path)?,
            None => SweepConfig::default(),
        };
        if let Some(v) = &self.channels {
            cfg.set("channels", v)?;
        }
        if let Some(v) = &self.x {
            cfg.set("x", v)?;
        }
        if let Some(v) = self.p_start {
            cfg.p_grid.start = v;
        }
        if let Some(v) = self.p_stop {
            cfg.p_grid.stop = v;
        }
        if let Some(v) = self.p_count {
            cfg.p_grid.count = v;
        }
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        Ok(cfg)
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<u8, ScanError> {
    match cli.command {
        Command::Sweep { grid, format, out: path } => {
            let mut cfg = grid.config()?;
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(path) = path {
                cfg.set("out", &path)?;
            }
            let reports = run_sweep(&cfg)?;
            match cfg.output.as_deref() {
                Some(path) => emit(&reports, cfg.format, Some(path))?,
                None => write_table(&rows(&reports), cfg.format, out)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { grid, tolerance } => {
            let mut cfg = grid.config()?;
            if let Some(t) = tolerance {
                cfg.tolerance = t;
            }
            let outcome = run_verify(&cfg)?;
            write!(out, "{}", outcome.render())
                .map_err(|e| ScanError::Io { path: "<stdout>".into(), source: e })?;
            Ok(if outcome.passed() { EXIT_OK } else { EXIT_TOLERANCE })
        }
    }
}

/// Parse `args` (program name first) and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_CONFIG
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ccr-scan: {e}");
            match e {
                ScanError::Config { .. } | ScanError::Io { .. } => EXIT_CONFIG,
                _ => EXIT_TOLERANCE,
            }
        }
    }
}


#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;
    use crate::emit::{parse_csv, write_csv, Cell, COLUMNS};

    struct Output {
        code: u8,
        stdout: String,
        stderr: String,
    }

    fn run_args(args: &[&str]) -> Output {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("ccr-scan").chain(args.iter().copied()), &mut out, &mut err);
        Output {
            code,
            stdout: String::from_utf8(out).unwrap(),
            stderr: String::from_utf8(err).unwrap(),
        }
    }

    fn sweep_to(path: &Path, extra: &[&str]) -> Output {
        let mut args = vec!["sweep", "--out", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        run_args(&args)
    }

    #[test]
    fn header_and_row_count() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("adc.csv");
        let o = sweep_to(&out, &["--channels", "adc", "--x", "0.5", "--p-count", "3"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let text = std::fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("all.csv");
        let o = sweep_to(&out, &["--p-count", "11", "--mu", "0.5"]);
        assert_eq!(o.code, EXIT_OK);
        let text = std::fs::read_to_string(&out).unwrap();
        let rows = parse_csv(&text).unwrap();
        let mut again = Vec::new();
        write_csv(&rows, &mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }

    #[test]
    fn empty_cells_for_inapplicable_columns() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("pfc.csv");
        assert!(sweep_to(&out, &["--channels", "pfc", "--x", "0.5", "--p-count", "2"]).code == EXIT_OK);
        let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let col = |name: &str| COLUMNS.iter().position(|c| *c == name).unwrap();
        for r in &rows {
            assert_eq!(r[col("Cc_AB")], Cell::Empty);
            assert_eq!(r[col("mu")], Cell::Empty);
            assert!(matches!(r[col("Cc_AEA")], Cell::Real(_)));
        }
    }

    #[test]
    fn sudden_death_in_the_concurrence_column() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("esd.csv");
        assert!(sweep_to(&out, &["--channels", "adc", "--x", "0.5"]).code == EXIT_OK);
        let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let c = COLUMNS.iter().position(|c| *c == "concurrence_AB").unwrap();
        let conc: Vec<f64> = rows.iter().map(|r| r[c].as_real().unwrap()).collect();
        let first_zero = conc.iter().position(|v| *v == 0.0).unwrap();
        // 1/√3 ≈ 0.577: nearest grid point is p = 0.58
        assert_eq!(first_zero, 58);
        assert!(conc[first_zero..].iter().all(|v| *v == 0.0));
        assert!(conc[..first_zero].iter().all(|v| *v > 0.0));
    }

    #[test]
    fn json_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("cadc.json");
        let o = sweep_to(&out, &["--channels", "cadc", "--x", "0.5", "--p-count", "2", "--format", "json"]);
        assert_eq!(o.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["channel"], "CADC");
        assert_eq!(rows[0]["mu"], 1.0);
    }

    #[test]
    fn config_file_with_flag_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("scan.conf");
        let out = dir.path().join("t.csv");
        std::fs::write(&cfg, "channels = pdc\nx = 0.25, 0.5\np_count = 5\n").unwrap();
        let o = sweep_to(&out, &["--config", cfg.to_str().unwrap(), "--p-count", "2"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r[0] == Cell::Text("PDC".into())));
    }

    #[test]
    fn config_errors_exit_2() {
        for args in [
            &["sweep", "--x", "1.5"][..],
            &["sweep", "--channels", "nope"],
            &["sweep", "--p-count", "1"],
            &["sweep", "--no-such-flag"],
            &["verify", "--tolerance", "-1"],
            &["sweep", "--config", "/nonexistent/scan.conf"],
        ] {
            let o = run_args(args);
            assert_eq!(o.code, EXIT_CONFIG, "{args:?}");
        }
        let o = run_args(&["sweep", "--p-count", "1"]);
        assert!(o.stderr.contains("p_count"));
    }

    #[test]
    fn unwritable_output() {
        let o = run_args(&["sweep", "--channels", "adc", "--p-count", "2", "--out", "/nonexistent/dir/out.csv"]);
        assert_eq!(o.code, EXIT_CONFIG);
    }

    #[test]
    fn verify_tolerances() {
        let o = run_args(&["verify", "--channels", "adc", "--p-count", "11"]);
        assert_eq!(o.code, EXIT_OK);
        let text = o.stdout;
        assert!(text.contains("ADC_REDISTRIBUTION"));
        assert!(!text.contains("CADC_REDISTRIBUTION"));
        assert!(!text.contains("PDC_"));

        let o = run_args(&["verify", "--channels", "adc", "--p-count", "11", "--tolerance", "1e-16"]);
        assert_eq!(o.code, EXIT_TOLERANCE);
        let text = o.stdout;
        assert!(text.contains("FAIL"));
        assert!(text.lines().last().unwrap().contains("ADC_REDISTRIBUTION"));
    }

    #[test]
    fn stdout_when_no_output_path() {
        let o = run_args(&["sweep", "--channels", "dc", "--x", "0.5", "--p-count", "2"]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.stdout.lines().count(), 3);
    }

    #[test]
    fn help_exits_0() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.stdout.contains("verify"));
    }
}
