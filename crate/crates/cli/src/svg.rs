//! Barcode figure as plain SVG text: one band of 40 units per dimension,
//! one horizontal bar per interval, x axis the threshold in `[0, 1]`.

use std::fmt::Write as _;

use ripsbar_core::{Bar, Barcode};

const WIDTH: f64 = 800.0;
const BAND: f64 = 40.0;
const LEFT: f64 = 40.0;
const RIGHT: f64 = 790.0;

pub fn render(b: &Barcode, meta: &str) -> String {
    let dims = b.meta.max_dim + 1;
    let height = BAND * dims as f64;
    // unnormalised barcodes are scaled by their last threshold
    let scale = if b.meta.normalized {
        1.0
    } else {
        b.bars
            .iter()
            .map(|x| x.death)
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    };
    let x = |v: f64| LEFT + (RIGHT - LEFT) * (v / scale).clamp(0.0, 1.0);

    let mut out = String::new();
    writeln!(out, "<!-- {meta} -->").unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {height}" width="{WIDTH}" height="{height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>"#
    )
    .unwrap();

    let mut bars: Vec<&Bar> = b.bars.iter().collect();
    bars.sort_by(|p, q| {
        p.dim
            .cmp(&q.dim)
            .then(p.birth.total_cmp(&q.birth))
            .then(p.death.total_cmp(&q.death))
    });
    for dim in 0..dims {
        let top = BAND * dim as f64;
        writeln!(
            out,
            r#"<text x="4" y="{:.1}" font-family="monospace" font-size="12">H{dim}</text>"#,
            top + BAND / 2.0 + 4.0
        )
        .unwrap();
        if dim > 0 {
            writeln!(
                out,
                r##"<line x1="0" y1="{top:.1}" x2="{WIDTH}" y2="{top:.1}" stroke="#cccccc" stroke-width="0.5"/>"##
            )
            .unwrap();
        }
        let in_dim: Vec<&&Bar> = bars.iter().filter(|b| b.dim == dim).collect();
        if in_dim.is_empty() {
            continue;
        }
        let row = (BAND - 4.0) / in_dim.len() as f64;
        let thickness = (row * 0.7).min(4.0);
        for (i, bar) in in_dim.iter().enumerate() {
            let y = top + 2.0 + row * i as f64 + (row - thickness) / 2.0;
            let (x0, x1) = (x(bar.birth), x(bar.death));
            let colour = if bar.open { "#c0392b" } else { "#2c3e50" };
            writeln!(
                out,
                r#"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{thickness:.3}" fill="{colour}"/>"#,
                x1 - x0
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        r##"<line x1="{LEFT}" y1="{height}" x2="{RIGHT}" y2="{height}" stroke="#000000" stroke-width="1"/>"##
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
