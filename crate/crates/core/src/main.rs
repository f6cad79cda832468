use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hiergame::cert::RoughCert;
use hiergame::oracle::{oracle_class, verify_representation};
use hiergame::structural::cmd_structural;
use hiergame::sweep::{run_sweep, Grid};
use hiergame::transforms::{cut_head, cut_tail, dual_explicit, dual_spec, minor, remove_one, MinorStep};
use hiergame::{
    classify_rough, Class, Coalition, Error, GameDocument, GameForm, HierSpec, Kind, Mode, Multiset,
};

#[derive(Parser)]
#[command(name = "hiergame", version, about = "Weightedness of hierarchical simple games")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a game as weighted, roughly weighted, or neither.
    Classify {
        /// Cross-check the verdict against the feasibility oracle.
        #[arg(long)]
        oracle: bool,
        /// Merge equivalent levels of a non-canonical spec first.
        #[arg(long)]
        canonicalize: bool,
        file: PathBuf,
    },
    /// Emit the dual game.
    Dual { file: PathBuf },
    /// Report canonicity and emit the canonical spec.
    Canon { file: PathBuf },
    /// Emit a minor of the game.
    Minor {
        /// cut_tail, cut_head, remove_one:I (1-based level) or custom.
        #[arg(long)]
        op: String,
        /// Removed players for `custom`, as comma-separated level counts.
        #[arg(long = "A", value_name = "COUNTS")]
        a: Option<String>,
        /// For `custom`: the removed players are present (reduced game)
        /// rather than absent (subgame).
        #[arg(long)]
        reduced: bool,
        file: PathBuf,
    },
    /// Classify every canonical spec of a grid and compare with the oracle.
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        kmax: Option<u32>,
        /// Record per-spec wall time (makes output non-deterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Check the shift-extremal characterization on every monotone game of a
    /// universe.
    Structural {
        #[arg(long, value_name = "COUNTS")]
        universe: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Disjunctive,
    Conjunctive,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Disjunctive => Kind::Disjunctive,
            KindArg::Conjunctive => Kind::Conjunctive,
        }
    }
}

enum Failure {
    Disagreement,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Classify {
            oracle,
            canonicalize,
            file,
        } => classify(&file, oracle, canonicalize, cli.json),
        Command::Dual { file } => dual(&file),
        Command::Canon { file } => canon(&file, cli.json),
        Command::Minor { op, a, reduced, file } => minor_cmd(&file, &op, a.as_deref(), reduced),
        Command::Sweep {
            kind,
            levels,
            nmax,
            kmax,
            timings,
        } => sweep(
            Grid {
                kind: kind.into(),
                levels,
                nmax,
                kmax,
            },
            timings,
            cli.json,
        ),
        Command::Structural { universe } => structural(&universe, cli.json),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Disagreement) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_doc(path: &Path) -> Result<GameDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(GameDocument::parse(&text)?)
}

fn parse_counts(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("bad count `{p}` in `{s}`")))
        })
        .collect()
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn show_cert(c: &Option<RoughCert>) -> String {
    c.as_ref().map_or("-".into(), |c| c.to_string())
}

#[derive(Serialize)]
struct OracleCheck {
    class: Class,
    certificate: Option<RoughCert>,
    certificate_verified: Option<bool>,
    agrees: bool,
}

#[derive(Serialize)]
struct ClassifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    game: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical_spec: Option<GameDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_map: Option<Vec<usize>>,
    class: Class,
    matched_case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sub_case: Option<String>,
    certificate: Option<RoughCert>,
    #[serde(skip_serializing_if = "Option::is_none")]
    literal_case_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
}

fn classify(path: &Path, use_oracle: bool, canonicalize: bool, json_out: bool) -> CmdResult {
    let doc = read_doc(path)?;
    let mut report = match doc.validate()? {
        GameForm::Hierarchical(spec) => {
            let (spec, level_map) = if spec.canon_check().canonical {
                (spec, None)
            } else if canonicalize {
                let (c, map) = spec.canonicalize_semantic()?;
                (c, Some(map))
            } else {
                return Err(Error::NonCanonical(format!("{spec} (try --canonicalize)")).into());
            };
            let v = classify_rough(&spec)?;
            let mut r = ClassifyReport {
                name: doc.name.clone(),
                game: spec.to_string(),
                canonical_spec: level_map.as_ref().map(|_| GameDocument::from_spec(&spec)),
                level_map,
                class: v.class,
                matched_case: v.matched_case,
                sub_case: v.sub_case,
                certificate: v.certificate,
                literal_case_agrees: v.literal_case_agrees,
                oracle: None,
            };
            if use_oracle {
                r.oracle = Some(cross_check(&spec.realize()?, r.class, &r.certificate)?);
            }
            r
        }
        GameForm::Explicit(game) => {
            // No case analysis applies; the oracle decides.
            let (class, cert) = oracle_class(&game)?;
            ClassifyReport {
                name: doc.name.clone(),
                game: game.to_string(),
                canonical_spec: None,
                level_map: None,
                class,
                matched_case: "none".into(),
                sub_case: None,
                certificate: cert,
                literal_case_agrees: None,
                oracle: None,
            }
        }
    };
    if json_out {
        print_json(&report);
    } else {
        if let Some(n) = &report.name {
            println!("name      {n}");
        }
        println!("game      {}", report.game);
        if let (Some(d), Some(m)) = (&report.canonical_spec, &report.level_map) {
            println!(
                "canonical {:?} n={:?} k={:?} level map {:?}",
                d.kind.expect("spec document"),
                d.n.as_deref().unwrap_or_default(),
                d.k.as_deref().unwrap_or_default(),
                m.iter().map(|l| l + 1).collect::<Vec<_>>()
            );
        }
        println!("class     {}", report.class);
        match &report.sub_case {
            Some(s) => println!("case      {} via {s}", report.matched_case),
            None => println!("case      {}", report.matched_case),
        }
        println!("cert      {}", show_cert(&report.certificate));
        if report.literal_case_agrees == Some(false) {
            println!("note      the literal conjunctive case list reads this spec differently");
        }
        if let Some(o) = &report.oracle {
            println!(
                "oracle    {} {}",
                o.class,
                if o.agrees { "(agrees)" } else { "(DISAGREES)" }
            );
            println!("oracle cert {}", show_cert(&o.certificate));
        }
    }
    match report.oracle.take() {
        Some(o) if !o.agrees => Err(Failure::Disagreement),
        _ => Ok(()),
    }
}

fn cross_check(
    game: &hiergame::ExplicitGame,
    class: Class,
    cert: &Option<RoughCert>,
) -> Result<OracleCheck, Failure> {
    let (oclass, ocert) = oracle_class(game)?;
    let verified = match cert {
        Some(c) => {
            let mode = if class == Class::Weighted {
                Mode::Weighted
            } else {
                Mode::Rough
            };
            Some(verify_representation(game, c, mode)?)
        }
        None => None,
    };
    Ok(OracleCheck {
        class: oclass,
        certificate: ocert,
        certificate_verified: verified,
        agrees: oclass == class && verified != Some(false),
    })
}

fn dual(path: &Path) -> CmdResult {
    let doc = read_doc(path)?;
    let out = match doc.validate()? {
        GameForm::Hierarchical(spec) => GameDocument::from_spec(&dual_spec(&spec)?),
        GameForm::Explicit(game) => GameDocument::from_game(&dual_explicit(&game)?),
    };
    println!("{}", out.with_metadata_of(&doc).to_json());
    Ok(())
}

fn canon(path: &Path, json_out: bool) -> CmdResult {
    let doc = read_doc(path)?;
    let GameForm::Hierarchical(spec) = doc.validate()? else {
        return Err(Failure::Usage("canon needs a {kind, n, k} document".into()));
    };
    let report = spec.canon_check();
    let (canonical, level_map) = if report.canonical {
        (report.normalized_spec.clone(), None)
    } else {
        let (c, map) = spec.canonicalize_semantic()?;
        (c.canon_check().normalized_spec, Some(map))
    };
    let out = GameDocument::from_spec(&canonical).with_metadata_of(&doc);
    if json_out {
        print_json(&json!({
            "document": out,
            "report": report,
            "level_map": level_map.map(|m| m.iter().map(|l| l + 1).collect::<Vec<_>>()),
        }));
    } else {
        println!("{}", out.to_json());
        eprintln!(
            "canonical {} (a) {} (b) {:?} dummy_last_level {} passer_first_level {} blocker_first_level {}",
            report.canonical,
            report.condition_a,
            report.condition_b,
            report.dummy_last_level,
            report.passer_first_level,
            report.blocker_first_level
        );
        if let Some(m) = level_map {
            eprintln!("level map {:?}", m.iter().map(|l| l + 1).collect::<Vec<_>>());
        }
    }
    Ok(())
}

fn minor_cmd(path: &Path, op: &str, a: Option<&str>, reduced: bool) -> CmdResult {
    let doc = read_doc(path)?;
    let form = doc.validate()?;
    let named = |f: &dyn Fn(&HierSpec) -> Option<hiergame::transforms::NamedMinor>| {
        let GameForm::Hierarchical(spec) = &form else {
            return Err(Failure::Usage(format!("{op} needs a {{kind, n, k}} document")));
        };
        spec.require_canonical()?;
        f(spec)
            .map(|m| GameDocument::from_spec(&m.spec))
            .ok_or_else(|| Failure::Usage(format!("{op} does not apply to {spec}")))
    };
    let out = match op {
        "cut_tail" => named(&cut_tail)?,
        "cut_head" => named(&cut_head)?,
        "custom" => {
            let counts = parse_counts(
                a.ok_or_else(|| Failure::Usage("custom minors need --A COUNTS".into()))?,
            )?;
            let removed = Coalition::from_counts(counts);
            let step = if reduced {
                MinorStep::reduced(removed)
            } else {
                MinorStep::subgame(removed)
            };
            GameDocument::from_game(&minor(&form.realize()?, &step)?)
        }
        _ => {
            let level = op
                .strip_prefix("remove_one:")
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| Failure::Usage(format!("unknown minor op `{op}`")))?;
            named(&|s| remove_one(s, level - 1))?
        }
    };
    println!("{}", out.with_metadata_of(&doc).to_json());
    Ok(())
}

fn sweep(grid: Grid, timings: bool, json_out: bool) -> CmdResult {
    let report = run_sweep(&grid, timings);
    if json_out {
        println!("{}", report.to_json()?);
    } else {
        print!("{}", report.to_table());
    }
    let hard_errors = report
        .records
        .iter()
        .any(|r| r.error.as_deref().is_some_and(|e| !e.contains("exceeds the cap")));
    if report.summary.disagreements > 0 || hard_errors {
        return Err(Failure::Disagreement);
    }
    Ok(())
}

fn structural(universe: &str, json_out: bool) -> CmdResult {
    let u = Multiset::new(parse_counts(universe)?)?;
    let report = cmd_structural(&u)?;
    if json_out {
        print_json(&report);
    } else {
        print!("{}", report.to_table());
    }
    if !report.holds() {
        return Err(Failure::Disagreement);
    }
    Ok(())
}
