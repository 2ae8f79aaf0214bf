use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use counterfact::{LoadOptions, Mode, SimilarityConfig, TypeHint};
use counterfact_service::{router, run_analyze, AnalyzeRequest, Store, DATA_ROOT_ENV};

#[derive(Parser)]
#[command(name = "counterfact", version, about = "Counterfactual filter audits for tabular data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply filters to a CSV file and report their strength.
    Analyze {
        data: PathBuf,
        #[arg(long)]
        outcome: String,
        /// `col:lo..hi` or `col=a|b`; repeat to stack filters.
        #[arg(long = "filter")]
        filters: Vec<String>,
        #[arg(long, default_value = "counterfactual")]
        mode: Mode,
        #[arg(long, default_value_t = 0.5)]
        cf_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force a column type, e.g. `v_decile_score=numerical`.
        #[arg(long = "type")]
        types: Vec<String>,
        /// Include per-subset views of this feature.
        #[arg(long)]
        feature: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = DATA_ROOT_ENV, default_value = "./counterfact-data")]
        root: PathBuf,
    },
}

fn parse_types(types: &[String]) -> Result<LoadOptions, String> {
    let mut options = LoadOptions::default();
    for t in types {
        let (col, kind) = t
            .rsplit_once('=')
            .ok_or_else(|| format!("bad --type `{t}`, expected col=numerical|categorical"))?;
        options.overrides.insert(col.to_owned(), kind.parse::<TypeHint>()?);
    }
    Ok(options)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            data,
            outcome,
            filters,
            mode,
            cf_fraction,
            seed,
            types,
            feature,
            json,
        } => {
            let options = match parse_types(&types) {
                Ok(o) => o,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(1);
                }
            };
            let req = AnalyzeRequest {
                data,
                outcome,
                filters,
                mode,
                config: SimilarityConfig {
                    cf_fraction,
                    seed,
                    ..SimilarityConfig::default()
                },
                options,
                feature,
            };
            match run_analyze(&req) {
                Ok(report) if json => {
                    println!("{}", counterfact::to_canonical_json(&report).expect("report serializes"));
                    ExitCode::SUCCESS
                }
                Ok(report) => {
                    print!("{}", report.render_text());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Serve { port, host, root } => match serve(&host, port, root) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

#[tokio::main]
async fn serve(host: &str, port: u16, root: PathBuf) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .init();
    let store = Store::open(&root).with_context(|| format!("opening data root {}", root.display()))?;
    let listener = tokio::net::TcpListener::bind((host, port))
        .await
        .with_context(|| format!("binding {host}:{port}"))?;
    tracing::info!(addr = %listener.local_addr()?, root = %root.display(), "serving");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
