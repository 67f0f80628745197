use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use costshare::decompose::decompose as level_sets;
use costshare::gamefile::{parse_order, GameFileError, GameSpec, LoadedGame};
use costshare::mechanism::{allocate as run_mechanism, MechanismConfig};
use costshare::report::{read_records, write_records, Record, RecordBody};
use costshare::shapley::shapley_oracle;
use costshare::shuffle::{reconstruct, shuffle_trace, CoordinateKind};
use costshare::verify::{replay as replay_witness, run_suite, Property, SuiteError, SuiteOptions};
use costshare::{ArrivalOrder, Error, Players};
use thiserror::Error;

use crate::render;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("property failure")]
    PropertyFailure,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::PropertyFailure => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(report) => CliError::Invalid(report.messages().join("; ")),
            Error::NotZeroOne => {
                CliError::Invalid("the mechanism requires a 0-1 valued cost function".into())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<LoadedGame, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    GameSpec::load(&text).map_err(|e| match e {
        GameFileError::Invalid(report) => {
            let named = GameSpec::parse(&text)
                .ok()
                .and_then(|spec| Players::new(spec.players).ok())
                .map_or_else(
                    || report.messages(),
                    |players| report.named_messages(&players),
                );
            CliError::Invalid(format!("{}: {}", path.display(), named.join("; ")))
        }
        other => CliError::Input(format!("{}: {other}", path.display())),
    })
}

fn names(list: &str) -> Vec<&str> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn order_of(game: &LoadedGame, flag: Option<&str>) -> Result<ArrivalOrder, CliError> {
    match flag {
        Some(list) => parse_order(&game.players, &names(list), "--arrival")
            .map_err(|e| CliError::Input(e.to_string())),
        None => game.arrival.clone().ok_or_else(|| {
            CliError::Input("no arrival order: give --arrival or an \"arrival\" field".into())
        }),
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "game".into(), |s| s.to_string_lossy().into_owned())
}

fn seq(players: &Players, order: &[costshare::PlayerId]) -> String {
    players.format_sequence(order)
}

pub struct AllocateArgs {
    pub game: PathBuf,
    pub mechanism: String,
    pub cd: CoordinateKind,
    pub trace: bool,
    pub report: Option<PathBuf>,
    pub arrival: Option<String>,
    pub decimal: Option<usize>,
}

pub fn allocate<W: Write>(out: &mut W, args: &AllocateArgs) -> Result<(), CliError> {
    let config = MechanismConfig::from_parts(&args.mechanism, args.cd).map_err(CliError::Input)?;
    let game = load(&args.game)?;
    let order = order_of(&game, args.arrival.as_deref())?;
    let trace = run_mechanism(&game.cost, &order, config)?;
    let players = &game.players;
    writeln!(out, "mechanism: {config}")?;
    writeln!(out, "arrival: {}", seq(players, order.as_slice()))?;
    if args.trace {
        for (k, step) in trace.steps().iter().enumerate() {
            writeln!(
                out,
                "after {}: {}",
                seq(players, &order.as_slice()[..=k]),
                render::shares(players, step.iter(), args.decimal)
            )?;
        }
    }
    if let Some(last) = trace.final_shares() {
        writeln!(
            out,
            "final: {}",
            render::shares(players, last.iter(), args.decimal)
        )?;
    }
    if let Some(path) = &args.report {
        let instance = instance_name(&args.game);
        let records: Vec<Record> = trace
            .steps()
            .iter()
            .enumerate()
            .map(|(k, step)| {
                Record::new(RecordBody::Allocation {
                    instance: instance.clone(),
                    mechanism: config.to_string(),
                    step: k + 1,
                    arrived: order.as_slice()[..=k]
                        .iter()
                        .map(|&p| players.name(p).to_string())
                        .collect(),
                    shares: step
                        .iter()
                        .map(|(p, v)| (players.name(p).to_string(), v.to_string()))
                        .collect(),
                })
            })
            .collect();
        write_records(fs::File::create(path)?, &records)?;
    }
    Ok(())
}

pub fn shuffle<W: Write>(
    out: &mut W,
    path: &Path,
    cd: CoordinateKind,
    arrival: Option<&str>,
) -> Result<(), CliError> {
    let game = load(path)?;
    let order = order_of(&game, arrival)?;
    let zero_one = game.cost.to_zero_one()?;
    let players = &game.players;
    writeln!(out, "cd: {cd}  (* marginal, ^ related)")?;
    for (k, image) in shuffle_trace(&order, &zero_one, &cd)?.iter().enumerate() {
        let marked: Vec<String> = image
            .sequence()
            .iter()
            .map(|&p| {
                let mark = if Some(p) == image.marginal() {
                    "*"
                } else if Some(p) == image.related() {
                    "^"
                } else {
                    ""
                };
                format!("{}{mark}", players.name(p))
            })
            .collect();
        writeln!(
            out,
            "+{}: {}",
            players.name(order.as_slice()[k]),
            marked.join(",")
        )?;
    }
    Ok(())
}

pub fn invert<W: Write>(
    out: &mut W,
    path: &Path,
    image: &str,
    cd: CoordinateKind,
    steps: bool,
) -> Result<(), CliError> {
    let game = load(path)?;
    let image = parse_order(&game.players, &names(image), "--image")
        .map_err(|e| CliError::Input(e.to_string()))?;
    let zero_one = game.cost.to_zero_one()?;
    let r = reconstruct(image.as_slice(), &zero_one, &cd)?;
    writeln!(out, "{}", seq(&game.players, r.order.as_slice()))?;
    if steps {
        writeln!(
            out,
            "last arrivals: {}",
            seq(&game.players, &r.last_arrivals)
        )?;
    }
    Ok(())
}

pub fn shapley<W: Write>(out: &mut W, path: &Path, decimal: Option<usize>) -> Result<(), CliError> {
    let game = load(path)?;
    let values = shapley_oracle(&game.cost)?;
    for p in game.cost.universe().players() {
        writeln!(
            out,
            "{}: {}",
            game.players.name(p),
            render::value(&values[p.index()], decimal)
        )?;
    }
    Ok(())
}

pub fn decompose<W: Write>(
    out: &mut W,
    path: &Path,
    decimal: Option<usize>,
) -> Result<(), CliError> {
    let game = load(path)?;
    let d = level_sets(&game.cost)?;
    for comp in d.components() {
        let sets: Vec<String> = comp
            .game
            .minimal_sets()
            .iter()
            .map(|&s| game.players.format_coalition(s))
            .collect();
        writeln!(
            out,
            "weight {}: {}",
            render::value(&comp.weight, decimal),
            sets.join(" ")
        )?;
    }
    if d.is_empty() {
        writeln!(out, "no components (zero function)")?;
    }
    Ok(())
}

fn suite_error(e: SuiteError) -> CliError {
    match e {
        SuiteError::Core(e) => e.into(),
        other => CliError::Input(other.to_string()),
    }
}

pub fn verify<W: Write>(
    out: &mut W,
    suite: &str,
    options: SuiteOptions,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let result = run_suite(suite, options).map_err(suite_error)?;
    for r in &result.reports {
        writeln!(out, "{r}")?;
        for (key, w) in &r.witnesses {
            writeln!(out, "  witness {key}: {}", w.detail)?;
        }
    }
    writeln!(
        out,
        "suite {}: {} properties, {} checks, {} failures, {:.2?}",
        result.suite,
        result.reports.len(),
        result.checked(),
        result.failures(),
        result.elapsed
    )?;
    if let Some(path) = report {
        write_records(fs::File::create(path)?, &result.records())?;
    }
    if result.passed() {
        Ok(())
    } else {
        Err(CliError::PropertyFailure)
    }
}

pub fn replay<W: Write>(out: &mut W, path: &Path) -> Result<(), CliError> {
    let file =
        fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let records = read_records(BufReader::new(file))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut reproduced = 0;
    let mut total = 0;
    for record in records {
        let RecordBody::Witness {
            instance,
            property,
            witness,
            ..
        } = record.body
        else {
            continue;
        };
        let property: Property = property.parse().map_err(CliError::Input)?;
        total += 1;
        match replay_witness(property, &witness).map_err(suite_error)? {
            Some(detail) => {
                reproduced += 1;
                writeln!(out, "FAIL {property} {instance}: {detail}")?;
            }
            None => writeln!(out, "PASS {property} {instance}: no longer fails")?,
        }
    }
    writeln!(out, "replayed {total} witnesses, {reproduced} reproduced")?;
    if reproduced > 0 {
        Err(CliError::PropertyFailure)
    } else {
        Ok(())
    }
}
