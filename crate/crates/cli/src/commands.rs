use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ripsbar_core::dice::{self, longest_cycle, DiceDistances, DEFAULT_CYCLE_BUDGET};
use ripsbar_core::formats;
use ripsbar_core::metric::{build_distance_matrix, FLOAT_TOLERANCE};
use ripsbar_core::pipeline::{persist_with_filtration, DiceRun};
use ripsbar_core::point_cloud::{sample_region, Region};
use ripsbar_core::{
    analysis, Barcode, Die, DistanceMatrix, MetricSelector, PersistOptions, Point2,
};

use crate::config::{RegionKind, RunConfig};
use crate::svg;

/// Bad flags or flag combinations; exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A result that breaks a guarantee of the library; exit code 3.
#[derive(Debug)]
pub struct InternalError(pub String);

impl fmt::Display for InternalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for InternalError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const PLANAR_MAX_DIM: usize = 2;
const DICE_MAX_DIM: usize = 9;

enum Input {
    Points(Vec<Point2>),
    Matrix(DistanceMatrix),
    Dice(Vec<Die>),
}

impl Input {
    fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let ctx = || format!("parsing {}", path.display());
        if formats::looks_like_points(&text) {
            return Ok(Self::Points(
                formats::read_points_csv(&text).with_context(ctx)?,
            ));
        }
        if let Ok(dice) = formats::read_dice_list(&text) {
            if !dice.is_empty() {
                return Ok(Self::Dice(dice));
            }
        }
        Ok(Self::Matrix(
            formats::read_matrix_csv(&text, FLOAT_TOLERANCE).with_context(ctx)?,
        ))
    }

    fn len(&self) -> usize {
        match self {
            Self::Points(p) => p.len(),
            Self::Matrix(m) => m.len(),
            Self::Dice(d) => d.len(),
        }
    }

    fn default_max_dim(&self) -> usize {
        match self {
            Self::Dice(_) => DICE_MAX_DIM,
            _ => PLANAR_MAX_DIM,
        }
    }

    fn check_metric(&self, m: MetricSelector) -> Result<()> {
        match self {
            Self::Points(_) if m.is_dice() => Err(usage(format!(
                "`{m}` is a dice distance; points take euclidean, taxicab or supremum"
            ))),
            Self::Dice(_) if !m.is_dice() => Err(usage(format!(
                "`{m}` is a planar metric; dice take similarity, dice-euclidean, foliation-symmetry or shortest-path"
            ))),
            _ => Ok(()),
        }
    }

    fn matrix(&self, m: MetricSelector, cfg: &RunConfig) -> Result<DistanceMatrix> {
        Ok(match self {
            Self::Points(p) => build_distance_matrix(p, m.planar().expect("checked planar"))?,
            Self::Matrix(d) => d.clone(),
            Self::Dice(d) => dice_matrix(d, m, cfg)?,
        })
    }
}

fn dice_matrix(dice: &[Die], m: MetricSelector, cfg: &RunConfig) -> Result<DistanceMatrix> {
    if m == MetricSelector::DiceEuclidean {
        return Ok(dice::euclidean_dice_matrix(dice)?);
    }
    let g = dice::build_graph_on(dice, cfg.tie_convention)?;
    let d = DiceDistances::compute(&g, cfg.symmetry_pairing)?;
    Ok(match m {
        MetricSelector::Similarity => d.similarity_matrix(),
        MetricSelector::ShortestPath => d.shortest_path_matrix(),
        _ => d.foliation_symmetry_matrix()?,
    })
}

fn parse_metric(name: &str) -> Result<MetricSelector> {
    name.parse().map_err(|_| {
        let valid: Vec<&str> = MetricSelector::ALL.iter().map(|m| m.name()).collect();
        usage(format!(
            "unknown metric `{name}`; valid metrics: {}",
            valid.join(", ")
        ))
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))
}

fn options(cfg: &RunConfig, max_dim: usize) -> PersistOptions {
    PersistOptions {
        max_dim,
        stop_when_connected: cfg.stop_when_connected,
        normalize: cfg.normalize,
    }
}

fn check_barcode(b: &Barcode, opts: PersistOptions) -> Result<()> {
    if let Some(bar) = b
        .bars
        .iter()
        .chain(&b.zero_length)
        .find(|x| x.dim > opts.max_dim)
    {
        bail!(InternalError(format!(
            "bar of dimension {} above max_dim {}",
            bar.dim, opts.max_dim
        )));
    }
    if opts.stop_when_connected && b.open_count(0) != 1 {
        bail!(InternalError(format!(
            "{} open H0 bars after stopping on connectivity",
            b.open_count(0)
        )));
    }
    Ok(())
}

pub fn cloud(cfg: &RunConfig) -> Result<()> {
    let region = match cfg.region.unwrap_or(RegionKind::Holes) {
        RegionKind::Holes => Region::holed_disk(),
        RegionKind::Disk => Region::disk(1.0),
    };
    let n = cfg.points.expect("cloud always sets points") as usize;
    let points = sample_region(&region, n, cfg.seed)?;
    prepare_out(cfg)?;
    write(
        &cfg.out,
        "points.csv",
        &formats::write_points_csv(&points, Some(&cfg.metadata())),
    )?;
    println!(
        "wrote {} points to {}",
        n,
        cfg.out.join("points.csv").display()
    );
    Ok(())
}

pub fn dice(cfg: &RunConfig) -> Result<()> {
    let run = DiceRun::new(
        cfg.sides,
        cfg.max_face,
        cfg.face_sum,
        cfg.tie_convention,
        cfg.symmetry_pairing,
    )?;
    let meta = cfg.metadata();
    prepare_out(cfg)?;
    let ntd = &run.ntd;
    println!(
        "dice space: {} dice, {} beating edges ({} ties)",
        run.space.len(),
        run.graph.edge_count(),
        cfg.tie_convention
    );
    println!("non-transitive dice: {}", ntd.len());

    write(
        &cfg.out,
        "dice.txt",
        &formats::write_dice_list(ntd.nodes(), Some(&meta)),
    )?;
    write(&cfg.out, "graph.dot", &formats::write_dot(ntd, Some(&meta)))?;
    let hash = format!("# {meta}\n");
    if ntd.is_empty() {
        eprintln!("warning: no non-transitive dice in this space; writing empty outputs");
        for name in [
            "similarity.csv",
            "euclidean.csv",
            "foliation_symmetry.csv",
            "shortest_path.csv",
        ] {
            write(&cfg.out, name, &hash)?;
        }
        return Ok(());
    }

    let euclid = dice::euclidean_dice_matrix(ntd.nodes())?;
    write(
        &cfg.out,
        "euclidean.csv",
        &formats::write_matrix_csv(&euclid, Some(&meta)),
    )?;
    match run.distances() {
        Ok(d) => {
            write(
                &cfg.out,
                "similarity.csv",
                &formats::write_matrix_csv(&d.similarity_matrix(), Some(&meta)),
            )?;
            write(
                &cfg.out,
                "shortest_path.csv",
                &formats::write_matrix_csv(&d.shortest_path_matrix(), Some(&meta)),
            )?;
            match d.foliation_symmetry_matrix() {
                Ok(f) => write(
                    &cfg.out,
                    "foliation_symmetry.csv",
                    &formats::write_matrix_csv(&f, Some(&meta)),
                )?,
                Err(e) => {
                    eprintln!("warning: foliation-symmetry distance unavailable: {e}");
                    write(&cfg.out, "foliation_symmetry.csv", &hash)?;
                }
            }
        }
        Err(e) => {
            eprintln!("warning: graph distances unavailable: {e}");
            for name in [
                "similarity.csv",
                "foliation_symmetry.csv",
                "shortest_path.csv",
            ] {
                write(&cfg.out, name, &hash)?;
            }
        }
    }

    if ntd.len() <= DEFAULT_CYCLE_BUDGET {
        let cycle = longest_cycle(ntd, DEFAULT_CYCLE_BUDGET)?;
        let labels: Vec<String> = cycle.iter().map(Die::label).collect();
        println!("longest cycle ({}): {}", cycle.len(), labels.join(" -> "));
    }
    Ok(())
}

pub fn persist(cfg: &mut RunConfig, dump_filtration: bool) -> Result<()> {
    let input = Input::load(cfg.input.as_deref().expect("persist has input"))?;
    let metric = match cfg.metrics.as_slice() {
        [] => match input {
            Input::Points(_) => Some(MetricSelector::Euclidean),
            Input::Dice(_) => Some(MetricSelector::Similarity),
            Input::Matrix(_) => None,
        },
        [one] => Some(parse_metric(one)?),
        _ => return Err(usage("persist takes one --metric; use compare for several")),
    };
    if let Some(m) = metric {
        input.check_metric(m)?;
    }
    let max_dim = cfg.max_dim.unwrap_or(input.default_max_dim());
    cfg.max_dim = Some(max_dim);
    let name = metric.map_or("precomputed", MetricSelector::name);
    let m = match metric {
        Some(sel) => input.matrix(sel, cfg)?,
        None => input.matrix(MetricSelector::Euclidean, cfg)?,
    };
    let opts = options(cfg, max_dim);
    let (f, b) = persist_with_filtration(&m, name, opts)?;
    check_barcode(&b, opts)?;

    let meta = cfg.metadata();
    prepare_out(cfg)?;
    write(
        &cfg.out,
        "barcode.csv",
        &formats::write_barcode_csv(&b, Some(&meta)),
    )?;
    write(&cfg.out, "barcode.svg", &svg::render(&b, &meta))?;
    if dump_filtration {
        write(
            &cfg.out,
            "filtration.txt",
            &formats::write_filtration_dump(&f, Some(&meta)),
        )?;
    }
    println!("{} points, {} simplices, metric {name}", m.len(), f.len());
    for d in 0..=max_dim {
        println!(
            "H{d}: {} bars ({} open)",
            b.bars_of_dim(d).count(),
            b.open_count(d)
        );
    }
    Ok(())
}

pub fn compare(cfg: &mut RunConfig) -> Result<()> {
    if cfg.metrics.len() < 2 {
        return Err(usage(
            "compare needs at least two metrics, e.g. --metric euclidean,taxicab",
        ));
    }
    let metrics = cfg
        .metrics
        .iter()
        .map(|m| parse_metric(m))
        .collect::<Result<Vec<_>>>()?;
    let input = Input::load(cfg.input.as_deref().expect("compare has input"))?;
    if matches!(input, Input::Matrix(_)) {
        return Err(usage(
            "compare needs points or dice input; a distance matrix fixes the metric",
        ));
    }
    for &m in &metrics {
        input.check_metric(m)?;
    }
    let max_dim = cfg.max_dim.unwrap_or(input.default_max_dim());
    cfg.max_dim = Some(max_dim);
    let opts = options(cfg, max_dim);

    let cfg_ref = &*cfg;
    let input_ref = &input;
    let runs: Vec<Result<(String, Barcode)>> = std::thread::scope(|s| {
        let handles: Vec<_> = metrics
            .iter()
            .map(|&m| {
                s.spawn(move || -> Result<(String, Barcode)> {
                    let matrix = input_ref.matrix(m, cfg_ref)?;
                    let (_, b) = persist_with_filtration(&matrix, m.name(), opts)?;
                    check_barcode(&b, opts)?;
                    Ok((m.name().to_string(), b))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("metric run panicked"))
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let comparison = analysis::compare(&runs)?;

    let meta = cfg.metadata();
    prepare_out(cfg)?;
    for (name, b) in &runs {
        write(
            &cfg.out,
            &format!("barcode_{name}.csv"),
            &formats::write_barcode_csv(b, Some(&meta)),
        )?;
    }
    write(
        &cfg.out,
        "stats.csv",
        &formats::write_stats_csv(&comparison, Some(&meta)),
    )?;
    let table = comparison.to_string();
    write(&cfg.out, "comparison.txt", &format!("# {meta}\n{table}"))?;
    let unit = if matches!(input, Input::Dice(_)) {
        "dice"
    } else {
        "points"
    };
    println!("{} {unit}", input.len());
    print!("{table}");
    Ok(())
}

pub fn stats(cfg: &RunConfig) -> Result<()> {
    let path = cfg.input.as_deref().expect("stats has input");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let b =
        formats::read_barcode_csv(&text).with_context(|| format!("parsing {}", path.display()))?;
    let stats = (0..=b.meta.max_dim)
        .map(|d| analysis::bar_stats(&b, d))
        .collect::<ripsbar_core::Result<Vec<_>>>()?;
    prepare_out(cfg)?;
    write(
        &cfg.out,
        "stats.csv",
        &formats::write_single_stats(&b.meta.metric, &stats, Some(&cfg.metadata())),
    )?;
    print!("{}", formats::single_stats_table(&b.meta.metric, &stats));
    Ok(())
}
