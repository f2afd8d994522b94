use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use islands::cache::{ResultCache, FLAT_ENGINE_TAG, FRONT_ENGINE_TAG};
use islands::constructors::{
    minimal_maximal_generator, nested_cubes, nested_min_system, subdivision_system,
};
use islands::formulas::{
    f2_formula, f2prime_upper, fprime_upper, g2prime_formula, g_formula, hk_size, pluhar_bounds,
};
use islands::verify::{run_suite, Ranges, Row, Status};
use islands::{
    extremal_size, is_laminar, ExtremalReport, IslandSystem, Mode, SearchConfig, Shape, SystemRepr,
};

use crate::{
    CacheArgs, ConstructKind, Engine, Format, FormulaKind, Outcome, SearchArgs, VerifyArgs,
};

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut line = serde_json::to_string(value)?;
    line.push('\n');
    Ok(line)
}

pub fn construct(kind: ConstructKind, output: Option<&Path>) -> Result<Outcome> {
    let text = match kind {
        ConstructKind::NestedMin { shape } => json_line(&nested_min_system(&shape))?,
        ConstructKind::MinimalFamily { shape } => minimal_maximal_generator(&shape)
            .iter()
            .map(json_line)
            .collect::<Result<String>>()?,
        ConstructKind::NestedCubes { d, m } => json_line(&nested_cubes(d, m)?)?,
        ConstructKind::Subdivision { d, k } => json_line(&subdivision_system(d, k)?)?,
    };
    emit(output, &text)?;
    Ok(Outcome::Ok)
}

fn read_input(input: &Path) -> Result<String> {
    if input == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))
}

pub fn check(input: &Path) -> Result<Outcome> {
    let text = read_input(input)?;
    let repr: SystemRepr = serde_json::from_str(&text).context("parsing system JSON")?;
    let bricks = repr.validated_bricks()?;
    if !is_laminar(&bricks)? {
        println!("laminar: false");
        println!("size: {}", bricks.len());
        return Ok(Outcome::Violated);
    }
    let h = IslandSystem::new(repr.shape, repr.cubic, bricks)?;
    let profiles = h.gap_profiles();
    let inner_gaps: Vec<_> = profiles
        .iter()
        .flat_map(|p| p.gaps.iter())
        .filter(|g| g.is_between_bricks())
        .collect();
    let uncovered_edges = profiles.iter().filter(|p| p.covered.is_empty()).count();
    println!("laminar: true");
    println!("maximal: {}", h.is_maximal());
    println!("size: {}", h.len());
    println!("max_elements: {}", h.max_elements().len());
    println!(
        "edges: {} ({} uncovered), gaps between bricks: {}, longest: {}",
        profiles.len(),
        uncovered_edges,
        inner_gaps.len(),
        inner_gaps.iter().map(|g| g.len()).max().unwrap_or(0)
    );
    println!("unoccupied vertex cells: {}", h.unoccupied_vertices().len());
    Ok(Outcome::Ok)
}

/// Runs searches through the result cache.
struct Searcher {
    base: SearchConfig,
    tag: &'static str,
    cache: Option<ResultCache>,
}

impl Searcher {
    fn new(base: SearchConfig, engine: Engine, cache: &CacheArgs) -> Result<Self> {
        let cache = if cache.no_cache {
            None
        } else {
            let opened = ResultCache::open(&cache.cache)
                .with_context(|| format!("opening cache {}", cache.cache.display()))?;
            if opened.skipped_lines() > 0 {
                eprintln!(
                    "warning: ignored {} unreadable cache lines",
                    opened.skipped_lines()
                );
            }
            Some(opened)
        };
        let tag = match engine {
            Engine::Front => FRONT_ENGINE_TAG,
            Engine::Flat => FLAT_ENGINE_TAG,
        };
        Ok(Searcher { base, tag, cache })
    }

    fn run(&mut self, shape: &Shape, mode: Mode, cubic: bool) -> islands::Result<ExtremalReport> {
        if let Some(hit) = self
            .cache
            .as_ref()
            .and_then(|c| c.lookup(shape, cubic, mode, self.tag))
        {
            return Ok(hit.clone());
        }
        let config = SearchConfig {
            mode,
            cubic,
            ..self.base.clone()
        };
        let report = extremal_size(shape, &config)?;
        if let Some(cache) = self.cache.as_mut() {
            cache.insert(self.tag, report.clone())?;
        }
        Ok(report)
    }
}

fn base_config(
    engine: Engine,
    parallel: usize,
    brick_cap: Option<u64>,
    node_cap: Option<u64>,
) -> SearchConfig {
    let mut config = SearchConfig::default().with_parallel_degree(parallel.max(1));
    config.use_front_decomposition = matches!(engine, Engine::Front);
    if let Some(cap) = brick_cap {
        config.brick_count_cap = cap;
        config.oracle_brick_cap = cap;
    }
    if let Some(cap) = node_cap {
        config.node_cap = cap;
    }
    config
}

pub fn search(args: SearchArgs) -> Result<Outcome> {
    let base = base_config(args.engine, args.parallel, args.brick_cap, args.node_cap);
    let mut searcher = Searcher::new(base, args.engine, &args.cache)?;
    let report = searcher.run(&args.shape, args.mode, args.cubic)?;
    print!("{}", json_line(&report)?);
    Ok(Outcome::Ok)
}

pub fn verify(args: VerifyArgs) -> Result<Outcome> {
    let base = base_config(Engine::Front, args.parallel, None, args.node_cap);
    let mut searcher = Searcher::new(base, Engine::Front, &args.cache)?;
    let ranges = Ranges {
        max_dim: args.max_dim,
        max_side: args.max_side,
        shapes: args.shape,
        enumeration_cap: args.enumeration_cap,
    };
    let rows = run_suite(args.suite, &ranges, &mut |s, m, c| searcher.run(s, m, c))?;
    match args.format {
        Format::Csv => write_csv(&rows)?,
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
    }
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = rows.iter().filter(|r| r.status == Status::Skipped).count();
    eprintln!(
        "{}: {} rows, {} failed, {} skipped",
        args.suite,
        rows.len(),
        failed,
        skipped
    );
    Ok(if failed > 0 {
        Outcome::Violated
    } else if skipped > 0 && args.strict {
        Outcome::Cap
    } else {
        Outcome::Ok
    })
}

fn write_csv(rows: &[Row]) -> Result<()> {
    let mut out = csv::Writer::from_writer(io::stdout());
    out.write_record(["shape", "cubic", "mode", "expected", "actual", "status"])?;
    for row in rows {
        out.write_record([
            row.shape.to_string(),
            row.cubic.to_string(),
            row.mode.clone(),
            row.expected.clone(),
            row.actual.clone(),
            row.status.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn formula(which: FormulaKind) -> Result<Outcome> {
    let text = match which {
        FormulaKind::G { shape } => g_formula(&shape)?.to_string(),
        FormulaKind::F2 { m1, m2 } => f2_formula(m1, m2)?.to_string(),
        FormulaKind::G2prime { m } => g2prime_formula(m)?.to_string(),
        FormulaKind::F2prime { m } => f2prime_upper(m)?.to_string(),
        FormulaKind::Sandwich { shape } => serde_json::to_string(&pluhar_bounds(&shape)?)?,
        FormulaKind::Fprime { d, m } => fprime_upper(d, m)?.to_string(),
        FormulaKind::Hk { d, k } => hk_size(d, k)?.to_string(),
    };
    println!("{text}");
    Ok(Outcome::Ok)
}
