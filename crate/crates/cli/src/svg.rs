//! Barcode diagrams as standalone SVG.

use std::fmt::Write;

use rtd_core::Barcode;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 10.0;
const BAR: f64 = 6.0;

/// One rectangle per bar, stacked top to bottom in order of birth, with the
/// filtration value on the horizontal axis. Infinite bars run to the right
/// edge and are drawn in a different colour.
pub fn barcode_svg(barcode: &Barcode) -> String {
    let mut bars: Vec<_> = barcode.bars().to_vec();
    bars.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));

    let max_value = bars
        .iter()
        .flat_map(|b| [b.birth, b.death])
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let scale = if max_value > 0.0 { (WIDTH - 2.0 * MARGIN) / max_value } else { 1.0 };
    let height = 2.0 * MARGIN + ROW * bars.len() as f64;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    let axis_y = height - MARGIN / 2.0;
    writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        WIDTH - MARGIN
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="10">0</text><text x="{}" y="{}" font-size="10" text-anchor="end">{max_value:.4}</text>"#,
        height - 4.0,
        WIDTH - MARGIN,
        height - 4.0
    )
    .unwrap();
    for (row, bar) in bars.iter().enumerate() {
        let x = MARGIN + bar.birth * scale;
        let end = if bar.is_infinite() { WIDTH - MARGIN } else { MARGIN + bar.death * scale };
        let colour = if bar.is_infinite() { "#c0392b" } else { "#2c6fbb" };
        writeln!(
            out,
            r#"<rect x="{x:.3}" y="{:.3}" width="{:.3}" height="{BAR}" fill="{colour}"><title>{bar}</title></rect>"#,
            MARGIN + ROW * row as f64,
            (end - x).max(0.5)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
