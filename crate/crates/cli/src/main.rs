//! `parl`: run, sweep, attack and summarise privacy-aware RL experiments.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parl::harness::export::CONFIG_FILE;
use parl::harness::sweep::write_sweep_csv;
use parl::harness::{attack_run_dir, compute_metrics, export_run, run_experiment, run_sweep, ExperimentConfig, Report};
use parl::{Error, Result};

const SWEEP_FILE: &str = "sweep.csv";
const REPORT_FILE: &str = "report.csv";
const ATTACK_FILE: &str = "attack.csv";
const CLUSTERS_FILE: &str = "clusters.csv";

#[derive(Parser)]
#[command(name = "parl", version, about = "Privacy-aware Q-learning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its run directory.
    Run(RunArgs),
    /// Run every point of the config's sweep grid.
    Sweep(RunArgs),
    /// Cluster the emitted actions of a finished run.
    Attack(AttackArgs),
    /// Average sweep tables per configuration.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config; built-in thermal defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct AttackArgs {
    /// Directory written by `parl run`.
    run_dir: PathBuf,
    /// Clustering options; defaults to the run's own config echo.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the adversary seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write attack.csv and clusters.csv; defaults to the run directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// sweep.csv files to aggregate.
    #[arg(required = true)]
    tables: Vec<PathBuf>,
    /// Also write report.csv here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::thermal(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.4}"))
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = load_config(args.config.as_deref(), args.seed)?;
    let output = run_experiment(&cfg)?;
    let metrics = compute_metrics(&output.record, &cfg)?;
    export_run(&args.out, &cfg, &output, &metrics)?;
    println!(
        "{} steps, seed {}, {}: mi {:.4} bits, pmv_std {}, mean observable {}, accuracy {:.4} (k={}), state accuracy {}",
        metrics.steps,
        cfg.seed,
        cfg.mitigation,
        metrics.final_mi_bits,
        fmt_opt(metrics.pmv_std),
        fmt_opt(metrics.mean_observable),
        metrics.clustering_accuracy,
        metrics.attack_k,
        fmt_opt(metrics.state_accuracy),
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_sweep(args: &RunArgs) -> Result<()> {
    let Some(path) = args.config.as_deref() else {
        return Err(Error::config(
            "sweep",
            "`parl sweep` needs --config with a [sweep] section",
        ));
    };
    let cfg = load_config(Some(path), args.seed)?;
    let rows = run_sweep(&cfg)?;
    create_dir(&args.out)?;
    let table = args.out.join(SWEEP_FILE);
    let mut w = create(&table)?;
    write_sweep_csv(&cfg, &rows, &mut w).map_err(|e| e.context(table.display()))?;
    w.flush().map_err(|e| Error::io(&table, e))?;
    let echo = args.out.join(CONFIG_FILE);
    fs::write(&echo, cfg.echo()).map_err(|e| Error::io(&echo, e))?;
    for row in &rows {
        println!(
            "{:>3}  {:<28} mi {:.4}  pmv_std {}  accuracy {:.4}  utility_drop {}",
            row.point.index,
            row.point.mitigation.to_string(),
            row.metrics.final_mi_bits,
            fmt_opt(row.metrics.pmv_std),
            row.metrics.clustering_accuracy,
            fmt_opt(row.metrics.utility_drop),
        );
    }
    println!("wrote {}", table.display());
    Ok(())
}

fn cmd_attack(args: &AttackArgs) -> Result<()> {
    let cfg = match &args.config {
        Some(p) => Some(ExperimentConfig::load(p)?),
        None => None,
    };
    let report = attack_run_dir(&args.run_dir, cfg.as_ref(), args.seed)?;
    let out = args.out.as_deref().unwrap_or(&args.run_dir);
    create_dir(out)?;
    let summary = out.join(ATTACK_FILE);
    let mut w = create(&summary)?;
    report.write_summary(&mut w)?;
    w.flush().map_err(|e| Error::io(&summary, e))?;
    let clusters = out.join(CLUSTERS_FILE);
    let mut w = create(&clusters)?;
    report.write_clusters(&args.run_dir, &mut w)?;
    w.flush().map_err(|e| Error::io(&clusters, e))?;
    println!(
        "elbow k {}, clustered with k {}, accuracy {}",
        report.attack.elbow_k,
        report.attack.model.k,
        fmt_opt(report.accuracy())
    );
    println!("wrote {} and {}", summary.display(), clusters.display());
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let report = Report::from_paths(&args.tables)?;
    print!("{}", report.to_table());
    if let Some(out) = &args.out {
        create_dir(out)?;
        let path = out.join(REPORT_FILE);
        let mut w = create(&path)?;
        report.write_csv(&mut w)?;
        w.flush().map_err(|e| Error::io(&path, e))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn error_line(e: &Error) -> String {
    format!("error: kind={} key={} message={}", e.kind(), e.key().unwrap_or("-"), e)
}

fn main() -> ExitCode {
    match dispatch(&Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHORT: &str = "environment = thermal\nsteps = 720\nhuman = H2\n\
                         [mitigation]\nkind = adaparl\nzeta = 0.6\nlambda_percent = 0.8\n";

    fn exec(args: &[&str]) -> Result<()> {
        let cli = Cli::try_parse_from(std::iter::once("parl").chain(args.iter().copied())).unwrap();
        dispatch(&cli)
    }

    fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn run_writes_the_run_directory() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("exp.cfg");
        fs::write(&cfg, SHORT).unwrap();
        let out = dir.path().join("run");
        exec(&["run", "--config", s(&cfg), "--seed", "3", "--out", s(&out)]).unwrap();
        for f in [
            "run.csv",
            "metrics.csv",
            "config.echo",
            "adversary-input.csv",
            "refits.csv",
        ] {
            assert!(out.join(f).is_file(), "missing {f}");
        }
        assert!(fs::read_to_string(out.join("config.echo"))
            .unwrap()
            .contains("seed = 3"));
        assert_eq!(fs::read_to_string(out.join("run.csv")).unwrap().lines().count(), 721);

        let att = dir.path().join("att");
        exec(&["attack", s(&out), "--out", s(&att)]).unwrap();
        assert!(fs::read_to_string(att.join(ATTACK_FILE)).unwrap().lines().count() > 1);
        assert_eq!(
            fs::read_to_string(att.join(CLUSTERS_FILE)).unwrap().lines().count(),
            721
        );
    }

    #[test]
    fn sweep_then_report() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("sweep.cfg");
        fs::write(&cfg, format!("{SHORT}[sweep]\nzeta = 0.2, 0.8\n")).unwrap();
        let out = dir.path().join("sw");
        exec(&["sweep", "--config", s(&cfg), "--out", s(&out)]).unwrap();
        let table = out.join(SWEEP_FILE);
        assert_eq!(fs::read_to_string(&table).unwrap().lines().count(), 3);
        assert!(out.join(CONFIG_FILE).is_file());
        let rep = dir.path().join("rep");
        exec(&["report", s(&table), "--out", s(&rep)]).unwrap();
        assert!(fs::read_to_string(rep.join(REPORT_FILE)).unwrap().lines().count() >= 3);
    }

    #[test]
    fn errors_name_kind_and_key() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        fs::write(&cfg, "environment = thermal\n[mitigation]\nkind = fixed\nzeta = 1.5\n").unwrap();
        let out = dir.path().join("x");
        let e = exec(&["run", "--config", s(&cfg), "--out", s(&out)]).unwrap_err();
        assert!(
            error_line(&e).starts_with("error: kind=config key=mitigation.zeta "),
            "{}",
            error_line(&e)
        );
        assert!(!out.exists());

        fs::write(&cfg, "colour = blue\n").unwrap();
        let e = exec(&["run", "--config", s(&cfg)]).unwrap_err();
        assert_eq!(e.key(), Some("colour"));

        let e = exec(&["sweep"]).unwrap_err();
        assert_eq!(e.key(), Some("sweep"));
        assert!(Cli::try_parse_from(["parl", "report"]).is_err());
    }
}
