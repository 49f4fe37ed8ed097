use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rrvoa_cli::{run, DiskCache, RunConfig};
use rrvoa_core::Error;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs as usize)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cache = DiskCache::new(cfg.cache_dir.clone());
    let result = pool.install(|| run(&cfg, &cache)).and_then(|mut report| {
        if cfg.timing {
            report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        Ok((report.render(cfg.format)?, report.passed()))
    });
    match result {
        Ok((text, passed)) => {
            let written = match &cfg.out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Error::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
