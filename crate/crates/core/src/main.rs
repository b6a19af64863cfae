use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use treesib::construct::{build_t, generate_registry, min_radius, Registry};
use treesib::harness::{export, report_body, run_suites, Format, RunConfig, SUITES};
use treesib::Result;

#[derive(Parser)]
#[command(name = "treesib", about = "Build and check finite truncations of the sibling trees")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Number of sibling families 𝔰.
    #[arg(long = "s", global = true, default_value_t = 3)]
    sib_count: u32,
    #[arg(long, global = true, default_value_t = 1)]
    stage: u32,
    /// Truncation radius; defaults to the minimum for the stage.
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Registry JSON; the pinned 𝔰 = 3 registry when omitted.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build T_s(stage) for every s and write DOT and JSON exports.
    Build,
    /// Run verification suites (all of them when none is named).
    Verify {
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Export one object: t:<s>, spine, rball, ray:<s>, registry,
    /// poset-gadget:<n>:<m>, fingerprint:<u>:<v>.
    Export {
        object: String,
        #[arg(long, default_value = "dot")]
        format: Format,
    },
    /// Regenerate the sibling registry up to the stage.
    Registry {
        #[arg(long, default_value_t = 1)]
        bound: usize,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
}

impl Common {
    fn config(&self, suites: Vec<String>) -> RunConfig {
        let mut cfg = RunConfig::for_stage(self.stage);
        cfg.sib_count = self.sib_count;
        cfg.radius = self.radius.unwrap_or(min_radius(self.stage));
        cfg.seed = self.seed;
        cfg.out = self.out.clone();
        cfg.registry = self.registry.clone();
        if !suites.is_empty() {
            cfg.suites = suites;
        }
        cfg
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Build => {
            let cfg = cli.common.config(Vec::new());
            cfg.validate()?;
            println!("stage {} radius {} (minimum {}) config {}", cfg.stage, cfg.radius, min_radius(cfg.stage), cfg.hash());
            let reg = cfg.load_registry()?;
            for s in 0..cfg.sib_count {
                let tb = build_t(s, cfg.stage, cfg.truncation(), &reg)?;
                let obj = format!("t:{s}");
                let dot = export(&cfg, &obj, Format::Dot)?;
                let json = export(&cfg, &obj, Format::Json)?;
                println!("T_{s}: {} vertices -> {}, {}", tb.tree.len(), dot.display(), json.display());
            }
            Ok(true)
        }
        Cmd::Verify { suites } => {
            let cfg = cli.common.config(suites);
            println!("radius {} (minimum {} for stage {}) config {}", cfg.radius, min_radius(cfg.stage), cfg.stage, cfg.hash());
            let reports = run_suites(&cfg)?;
            std::fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join("report.jsonl");
            std::fs::write(&path, report_body(&reports)?)?;
            for r in &reports {
                println!("{}", r.summary());
            }
            let ok = reports.iter().all(|r| r.passed());
            println!("{} of {} suites passed; report in {}", reports.iter().filter(|r| r.passed()).count(), reports.len(), path.display());
            Ok(ok)
        }
        Cmd::Export { object, format } => {
            let cfg = cli.common.config(Vec::new());
            println!("{}", export(&cfg, &object, format)?.display());
            Ok(true)
        }
        Cmd::Registry { bound, window } => {
            let cfg = cli.common.config(Vec::new());
            let reg = generate_registry(cfg.sib_count, cfg.stage, bound, window)?;
            std::fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join(format!("registry-s{}.json", cfg.sib_count));
            std::fs::write(&path, reg.to_json()?)?;
            println!("{} siblings -> {}", reg.siblings.len(), path.display());
            if cfg.sib_count == 3 {
                println!("matches pinned registry: {}", reg == Registry::frozen());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            if let treesib::Error::UnknownSuite(_) = e {
                eprintln!("suites: {}", SUITES.join(", "));
            }
            ExitCode::from(2)
        }
    }
}
