use std::process::ExitCode;

use chronos::experiments::config::{resolve, Cli};
use chronos::experiments::run_scenario;
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let resolved = match resolve(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cfg = &resolved.config;
    match run_scenario(cfg, &resolved.notices) {
        Ok(manifest) => {
            for n in &manifest.notices {
                eprintln!("notice: {n}");
            }
            println!("{}", cfg.out.join("manifest.json").display());
            ExitCode::SUCCESS
        }
        Err(e) if e.is_config() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let diag = serde_json::json!({
                "scenario": cfg.scenario.name(),
                "error": e.to_string(),
                "detail": format!("{e:?}"),
            });
            let path = cfg.out.join("diagnostic.json");
            if std::fs::create_dir_all(&cfg.out).is_ok() {
                let _ = std::fs::write(&path, serde_json::to_string_pretty(&diag).unwrap_or_default() + "\n");
            }
            ExitCode::from(3)
        }
    }
}
