//! Text file formats: points, distance matrices, barcodes, statistics, dice
//! lists, DOT graphs and filtration dumps.
//!
//! Every writer takes an optional metadata line that is emitted first as a
//! comment in the file's own syntax. Readers skip `#` comment lines and
//! report errors with 1-based line numbers.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{fmt_stat, Comparison};
use crate::dice::{BeatingGraph, Die};
use crate::persistence::{Bar, Barcode, BarcodeMeta};
use crate::rips::Filtration;
use crate::{DistanceMatrix, Error, Point2, Result, VERSION};

const TOOL: &str = "ripsbar";
const BARCODE_META: &str = "# barcode ";
const LABELS: &str = "# labels: ";

/// `ripsbar <version> <config as JSON>`.
pub fn metadata_text<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_string(config).expect("config serialises");
    // keeps the text legal inside an XML comment; still valid JSON
    let json = json.replace("--", "-\\u002d");
    format!("{TOOL} {VERSION} {json}")
}

/// Inverse of [`metadata_text`], given a comment line in any of the three
/// comment syntaxes. Returns the version and the config.
pub fn parse_metadata(line: &str) -> Option<(String, serde_json::Value)> {
    let body = line
        .trim()
        .trim_start_matches('#')
        .trim_start_matches("//")
        .trim_start_matches("<!--")
        .trim_end_matches("-->")
        .trim();
    let rest = body.strip_prefix(TOOL)?.trim_start();
    let (version, json) = rest.split_once(' ')?;
    let value = serde_json::from_str(json).ok()?;
    Some((version.to_string(), value))
}

fn hash_header(out: &mut String, meta: Option<&str>) {
    if let Some(m) = meta {
        writeln!(out, "# {m}").unwrap();
    }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("`{}` is not a number", field.trim())))?;
    if !v.is_finite() {
        return Err(Error::parse(line, "non-finite value"));
    }
    Ok(v)
}

/// Shortest decimal that reads back to the same `f64`.
fn exact(v: f64) -> String {
    format!("{v:?}")
}

/// Seventeen significant digits.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_points_csv(points: &[Point2], meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    out.push_str("x,y\n");
    for p in points {
        writeln!(out, "{},{}", exact(p.x), exact(p.y)).unwrap();
    }
    out
}

pub fn read_points_csv(text: &str) -> Result<Vec<Point2>> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, "x,y")) => {}
        Some((n, _)) => return Err(Error::parse(n, "expected header `x,y`")),
        None => return Err(Error::EmptyInput("points file")),
    }
    let points = lines
        .map(|(n, l)| {
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != 2 {
                return Err(Error::parse(
                    n,
                    format!("expected 2 fields, found {}", fields.len()),
                ));
            }
            Ok(Point2::new(
                parse_f64(n, fields[0])?,
                parse_f64(n, fields[1])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    if points.is_empty() {
        return Err(Error::EmptyInput("points file"));
    }
    Ok(points)
}

/// True when the first data line is the points header.
pub fn looks_like_points(text: &str) -> bool {
    data_lines(text).next().is_some_and(|(_, l)| l == "x,y")
}

pub fn write_matrix_csv(m: &DistanceMatrix, meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    if let Some(labels) = m.labels() {
        writeln!(out, "{LABELS}{}", labels.join(",")).unwrap();
    }
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|&v| exact(v)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

/// Reads an `n x n` matrix, checking shape and symmetry within `tolerance`.
pub fn read_matrix_csv(text: &str, tolerance: f64) -> Result<DistanceMatrix> {
    let labels = text
        .lines()
        .find_map(|l| l.trim().strip_prefix(LABELS))
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let mut rows = Vec::new();
    let mut first_line = 0;
    for (n, l) in data_lines(text) {
        if rows.is_empty() {
            first_line = n;
        }
        let row = l
            .split(',')
            .map(|f| parse_f64(n, f))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(Error::parse(
                    n,
                    format!("expected {first} values, found {}", row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("distance matrix file"));
    }
    if rows.len() != rows[0].len() {
        return Err(Error::parse(
            first_line,
            format!("matrix is {}x{}, not square", rows.len(), rows[0].len()),
        ));
    }
    let mut m = DistanceMatrix::from_rows(rows)?.with_tolerance(tolerance);
    if let Some(l) = labels {
        if l.len() != m.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} labels for {} rows",
                l.len(),
                m.len()
            )));
        }
        m = m.with_labels(l);
    }
    m.checked()
}

fn bar_line(out: &mut String, b: &Bar) {
    writeln!(
        out,
        "{},{},{},{}",
        b.dim,
        sig17(b.birth),
        sig17(b.death),
        b.open as u8
    )
    .unwrap();
}

/// `dim,birth,death,open`, zero-length pairs included, bars in barcode order.
pub fn write_barcode_csv(b: &Barcode, meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    writeln!(
        out,
        "{BARCODE_META}{}",
        serde_json::to_string(&b.meta).unwrap()
    )
    .unwrap();
    out.push_str("dim,birth,death,open\n");
    let mut all: Vec<&Bar> = b.bars.iter().chain(&b.zero_length).collect();
    all.sort_by(|a, c| {
        a.dim
            .cmp(&c.dim)
            .then(a.birth.total_cmp(&c.birth))
            .then(a.death.total_cmp(&c.death))
            .then(a.open.cmp(&c.open))
    });
    for bar in all {
        bar_line(&mut out, bar);
    }
    out
}

/// Reads a barcode CSV. Without a `# barcode` metadata line, the barcode is
/// taken as normalised when every value lies in `[0, 1]`.
pub fn read_barcode_csv(text: &str) -> Result<Barcode> {
    let meta: Option<BarcodeMeta> = text
        .lines()
        .enumerate()
        .find_map(|(i, l)| {
            l.trim()
                .strip_prefix(BARCODE_META.trim_end())
                .map(|j| (i + 1, j))
        })
        .map(|(n, j)| {
            serde_json::from_str(j.trim())
                .map_err(|e| Error::parse(n, format!("bad barcode metadata: {e}")))
        })
        .transpose()?;
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, "dim,birth,death,open")) => {}
        Some((n, _)) => return Err(Error::parse(n, "expected header `dim,birth,death,open`")),
        None => return Err(Error::EmptyInput("barcode file")),
    }
    let mut bars = Vec::new();
    let mut zero_length = Vec::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 4 {
            return Err(Error::parse(
                n,
                format!("expected 4 fields, found {}", f.len()),
            ));
        }
        let dim = f[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(n, "bad dimension"))?;
        let open = match f[3].trim() {
            "0" => false,
            "1" => true,
            _ => return Err(Error::parse(n, "open must be 0 or 1")),
        };
        let bar = Bar {
            dim,
            birth: parse_f64(n, f[1])?,
            death: parse_f64(n, f[2])?,
            open,
        };
        if !open && bar.death < bar.birth {
            return Err(Error::parse(n, "death before birth"));
        }
        if !open && bar.death == bar.birth {
            zero_length.push(bar);
        } else {
            bars.push(bar);
        }
    }
    let meta = meta.unwrap_or_else(|| BarcodeMeta {
        metric: "unknown".into(),
        max_dim: bars
            .iter()
            .chain(&zero_length)
            .map(|b| b.dim)
            .max()
            .unwrap_or(0),
        normalized: bars
            .iter()
            .chain(&zero_length)
            .all(|b| (0.0..=1.0).contains(&b.birth) && (0.0..=1.0).contains(&b.death)),
        points: 0,
    });
    let mut b = Barcode {
        bars,
        zero_length,
        meta,
    };
    b.sort();
    Ok(b)
}

/// `metric,dim,count,avg,min,max`; absent lifespans render as `-`.
pub fn write_stats_csv(c: &Comparison, meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    out.push_str("metric,dim,count,avg,min,max\n");
    for (run, metric) in c.metrics.iter().enumerate() {
        for (dim, row) in c.rows.iter().enumerate() {
            let s = &row[run];
            let v = |x: Option<f64>| x.map_or_else(|| "-".to_string(), exact);
            writeln!(
                out,
                "{metric},{dim},{},{},{},{}",
                s.bar_count,
                v(s.avg_lifespan),
                v(s.min_lifespan),
                v(s.max_lifespan)
            )
            .unwrap();
        }
    }
    out
}

/// Single-barcode statistics table, for the `stats` command.
pub fn write_single_stats(metric: &str, stats: &[crate::BarStats], meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    out.push_str("metric,dim,count,avg,min,max\n");
    for s in stats {
        let v = |x: Option<f64>| x.map_or_else(|| "-".to_string(), exact);
        writeln!(
            out,
            "{metric},{},{},{},{},{}",
            s.dim,
            s.bar_count,
            v(s.avg_lifespan),
            v(s.min_lifespan),
            v(s.max_lifespan)
        )
        .unwrap();
    }
    out
}

/// Human-readable form of [`write_single_stats`].
pub fn single_stats_table(metric: &str, stats: &[crate::BarStats]) -> String {
    let mut out = format!(
        "{:<4} {:>6} {:>10} {:>10} {:>10}   ({metric})\n",
        "dim", "count", "avg", "min", "max"
    );
    for s in stats {
        writeln!(
            out,
            "{:<4} {:>6} {:>10} {:>10} {:>10}",
            format!("H{}", s.dim),
            s.bar_count,
            fmt_stat(s.avg_lifespan),
            fmt_stat(s.min_lifespan),
            fmt_stat(s.max_lifespan)
        )
        .unwrap();
    }
    out
}

pub fn write_dice_list(dice: &[Die], meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    let mut sorted: Vec<&Die> = dice.iter().collect();
    sorted.sort();
    for d in sorted {
        writeln!(out, "{d}").unwrap();
    }
    out
}

pub fn read_dice_list(text: &str) -> Result<Vec<Die>> {
    data_lines(text)
        .map(|(n, l)| l.parse::<Die>().map_err(|e| Error::parse(n, e.to_string())))
        .collect()
}

/// DOT digraph with nodes labelled by their faces and edges by `wins/total`.
pub fn write_dot(g: &BeatingGraph, meta: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(m) = meta {
        writeln!(out, "// {m}").unwrap();
    }
    writeln!(out, "digraph beating {{").unwrap();
    for d in g.nodes() {
        writeln!(out, "  \"{d}\";").unwrap();
    }
    for (i, j, c) in g.edges() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            g.nodes()[i],
            g.nodes()[j],
            c.label()
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Debug listing, one simplex per line: `dim, birth, vertices`.
pub fn write_filtration_dump(f: &Filtration, meta: Option<&str>) -> String {
    let mut out = String::new();
    hash_header(&mut out, meta);
    for s in f.simplices() {
        let verts: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
        writeln!(out, "{}, {}, {}", s.dim, exact(s.birth), verts.join(" ")).unwrap();
    }
    out
}
