//! Subcommands: validate, generate, morph, preview-field, serve, simulate.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use exhibit_scribe::authoring;
use exhibit_scribe::lexicon::{generate_forms, LanguagePack};
use exhibit_scribe::{Description, Generator, PackSet};

use crate::config::GatewayConfig;
use crate::load_bundle;
use crate::server::{self, AppState};
use crate::session::{Prefs, Visit};

#[derive(Debug, Parser)]
#[command(name = "exhibit-scribe", version, about = "Personalized museum exhibit descriptions")]
pub struct Cli {
    /// TOML configuration; PORT, BUNDLE_PATH, SELECTION_THETA and
    /// DECAY_LAMBDA in the environment override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a bundle and list diagnostics; exit status 1 on any error.
    Validate { bundle: PathBuf },
    /// Describe one exhibit in a fresh session, after an optional history.
    Generate {
        bundle: PathBuf,
        #[arg(long)]
        entity: String,
        #[arg(long, default_value = "en")]
        lang: String,
        #[arg(long, default_value = "adult")]
        user_type: String,
        #[arg(long)]
        max_facts: Option<usize>,
        /// Exhibits described first, comma separated.
        #[arg(long, value_delimiter = ',')]
        history: Vec<String>,
        /// Print the annotated JSON instead of plain text.
        #[arg(long)]
        json: bool,
    },
    /// Full form table of a lemma; `pack` is a built-in code or a pack file.
    Morph { pack: String, lemma: String, class: String },
    /// One sentence expressing `field`, for checking templates.
    PreviewField {
        bundle: PathBuf,
        field: String,
        #[arg(long, default_value = "en")]
        lang: String,
    },
    /// Run the HTTP service.
    Serve {
        bundle: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// Replay a scripted visit and print the transcript.
    ///
    /// Script lines: `describe ID`, `say-more ID`, `language CODE`,
    /// `user-type NAME`, `max-facts N`; `#` starts a comment.
    Simulate {
        bundle: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value = "en")]
        lang: String,
        #[arg(long, default_value = "adult")]
        user_type: String,
        #[arg(long)]
        max_facts: Option<usize>,
    },
}

/// Runs one command; the result is the process exit status.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let config = GatewayConfig::load(cli.config.as_deref())?;
    let generator = |bundle: &Path| -> Result<Generator> {
        Ok(Generator::new(load_bundle(bundle)?, PackSet::builtin(), config.generation.clone()))
    };
    match cli.command {
        Command::Validate { bundle } => {
            let kb = match load_bundle(&bundle) {
                Ok(kb) => kb,
                Err(e) => {
                    writeln!(out, "error: {e:#}")?;
                    return Ok(1);
                }
            };
            let diags = authoring::diagnostics(&kb, &PackSet::builtin());
            for d in &diags {
                writeln!(out, "{d}")?;
            }
            let errors = diags.iter().filter(|d| d.is_error()).count();
            writeln!(out, "{errors} error(s), {} warning(s)", diags.len() - errors)?;
            Ok(u8::from(errors > 0))
        }
        Command::Generate {
            bundle,
            entity,
            lang,
            user_type,
            max_facts,
            history,
            json,
        } => {
            let g = generator(&bundle)?;
            let d = g.preview(&entity, &lang, &user_type, max_facts, &history)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&d)?)?;
            } else {
                writeln!(out, "{}", d.text.text)?;
            }
            Ok(0)
        }
        Command::Morph { pack, lemma, class } => {
            let packs = PackSet::builtin();
            let loaded;
            let pack = match packs.get(&pack) {
                Ok(p) => p,
                Err(_) => {
                    let text = std::fs::read_to_string(&pack).with_context(|| format!("no built-in pack or file `{pack}`"))?;
                    loaded = LanguagePack::from_json(&text)?;
                    &loaded
                }
            };
            for (cell, form) in generate_forms(&lemma, &class, pack)? {
                writeln!(out, "{cell}\t{form}")?;
            }
            Ok(0)
        }
        Command::PreviewField { bundle, field, lang } => {
            writeln!(out, "{}", generator(&bundle)?.preview_phrase(&field, &lang)?)?;
            Ok(0)
        }
        Command::Serve {
            bundle,
            port,
            static_dir,
        } => {
            let mut config = config.clone();
            if let Some(p) = port {
                config.port = p;
            }
            if let Some(b) = bundle {
                config.bundle_path = Some(b);
            }
            if static_dir.is_some() {
                config.static_dir = static_dir;
            }
            let kb = match &config.bundle_path {
                Some(path) => load_bundle(path)?,
                None => exhibit_scribe::demo::demo_kb(),
            };
            let state = AppState::new(kb, PackSet::builtin(), &config);
            tokio::runtime::Runtime::new()?.block_on(server::serve(state, &config))?;
            Ok(0)
        }
        Command::Simulate {
            bundle,
            script,
            lang,
            user_type,
            max_facts,
        } => {
            let g = generator(&bundle)?;
            let text = std::fs::read_to_string(&script).with_context(|| format!("reading {}", script.display()))?;
            simulate(&g, &text, &lang, &user_type, max_facts, out)?;
            Ok(0)
        }
    }
}

/// Replays `script` on one session. Stops at the first failing line.
pub fn simulate(
    g: &Generator,
    script: &str,
    language: &str,
    user_type: &str,
    max_facts: Option<usize>,
    out: &mut impl Write,
) -> Result<()> {
    let mut visit = Visit::new(g, "simulation", user_type, language, max_facts)?;
    for (n, raw) in script.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (verb, arg) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let arg = arg.trim();
        let at = || format!("line {}: `{line}`", n + 1);
        if arg.is_empty() {
            bail!("{}: missing argument", at());
        }
        writeln!(out, "> {line}")?;
        let prefs = match verb {
            "describe" => {
                let d = g.describe(&mut visit.state, arg).with_context(at)?;
                print_description(&d, out)?;
                continue;
            }
            "say-more" => {
                let d = g.say_more(&mut visit.state, arg).with_context(at)?;
                print_description(&d, out)?;
                continue;
            }
            "language" => Prefs {
                language: Some(arg.to_string()),
                ..Prefs::default()
            },
            "user-type" => Prefs {
                user_type: Some(arg.to_string()),
                ..Prefs::default()
            },
            "max-facts" => Prefs {
                max_facts: Some(arg.parse().with_context(at)?),
                ..Prefs::default()
            },
            other => bail!("{}: unknown command `{other}`", at()),
        };
        visit.update(g, &prefs).with_context(at)?;
    }
    Ok(())
}

fn print_description(d: &Description, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{}", d.text.text)?;
    if d.exhausted {
        writeln!(out, "[exhausted]")?;
    } else {
        writeln!(out, "[facts: {}]", d.text.facts_expressed.join(", "))?;
    }
    Ok(())
}
