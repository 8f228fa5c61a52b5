//! Trace curves of the three operator families over a grid of weights.

use std::fmt::Write;

use crate::error::Result;
use crate::inequalities::{norm_tolerance, regime_orderings, HermitianPair, RegimeLabel};

pub const CSV_HEADER: &str = "t,trace_geom_mean,trace_exp_sum,trace_product,regime";

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    /// A value overflowed; the row is kept in the CSV and left out of the plot.
    Overflow,
    /// Names of the regime orderings that failed.
    Violated(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    /// `Tr(e^H #_t e^K)`
    pub trace_geometric_mean: f64,
    /// `Tr e^{(1-t)H + tK}`
    pub trace_exp_convex: f64,
    /// `Tr e^{(1-t)H} e^{tK}`
    pub trace_product: f64,
    pub regime: RegimeLabel,
    pub status: RowStatus,
}

impl SweepRow {
    pub fn is_plotted(&self) -> bool {
        self.status != RowStatus::Overflow
    }
}

fn traces(pair: &HermitianPair, t: f64) -> Result<(f64, f64, f64)> {
    // Both Gram factors give the trace as a squared Frobenius norm.
    let mean = pair
        .curves(1.0)?
        .forward
        .factor_at(t)?
        .frobenius_norm()
        .powi(2);
    let exp = pair.exp_convex_spectrum(t)?.iter().sum();
    let product = pair.symmetric_product_factor(t)?.frobenius_norm().powi(2);
    Ok((mean, exp, product))
}

/// One row per `t`, with the regime ordering checked on the three traces.
pub fn sweep_pair(pair: &HermitianPair, ts: &[f64]) -> Vec<SweepRow> {
    ts.iter()
        .map(|&t| {
            let regime = RegimeLabel::of(t);
            let values = traces(pair, t)
                .ok()
                .filter(|(a, b, c)| [a, b, c].iter().all(|v| v.is_finite()));
            let Some((a, b, c)) = values else {
                return SweepRow {
                    t,
                    trace_geometric_mean: f64::NAN,
                    trace_exp_convex: f64::NAN,
                    trace_product: f64::NAN,
                    regime,
                    status: RowStatus::Overflow,
                };
            };
            let failed: Vec<String> = regime
                .0
                .iter()
                .flat_map(|&r| regime_orderings(r, a, b, c))
                .filter(|&(_, lhs, rhs)| lhs - rhs > norm_tolerance(lhs, rhs))
                .map(|(name, _, _)| name.to_string())
                .collect();
            SweepRow {
                t,
                trace_geometric_mean: a,
                trace_exp_convex: b,
                trace_product: c,
                regime,
                status: if failed.is_empty() {
                    RowStatus::Ok
                } else {
                    RowStatus::Violated(failed)
                },
            }
        })
        .collect()
}

/// Shortest round-trip decimal; empty for non-finite values.
fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        String::new()
    }
}

/// The `regime` column carries the label, `overflow`, or the label followed by
/// `;violated=` and the failed orderings joined with `/`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for row in rows {
        let regime = match &row.status {
            RowStatus::Ok => row.regime.to_string(),
            RowStatus::Overflow => "overflow".to_string(),
            RowStatus::Violated(names) => format!("{};violated={}", row.regime, names.join("/")),
        };
        writeln!(
            s,
            "{},{},{},{},{}",
            num(row.t),
            num(row.trace_geometric_mean),
            num(row.trace_exp_convex),
            num(row.trace_product),
            regime
        )
        .expect("writing to a String");
    }
    s
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

/// Legend entries and colors of the three curves.
pub const SERIES: [(&str, &str); 3] = [
    ("Tr(e^H #_t e^K)", "red"),
    ("Tr e^((1-t)H+tK)", "green"),
    ("Tr e^((1-t)H) e^(tK)", "blue"),
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        (lo - 0.5 * lo.abs().max(1.0), hi + 0.5 * hi.abs().max(1.0))
    } else {
        (lo, hi)
    }
}

/// An 800x500 plot of the three traces against `t` with linear axes.
/// Overflowed rows are skipped; rows that fail the ordering get a black marker.
pub fn sweep_svg(rows: &[SweepRow], title: &str) -> String {
    let shown: Vec<&SweepRow> = rows.iter().filter(|r| r.is_plotted()).collect();
    let (t0, t1) = span(shown.iter().map(|r| r.t));
    let (y0, y1) = span(
        shown
            .iter()
            .flat_map(|r| [r.trace_geometric_mean, r.trace_exp_convex, r.trace_product]),
    );
    let px = |t: f64| LEFT + (t - t0) / (t1 - t0) * (WIDTH - LEFT - RIGHT);
    let py = |y: f64| HEIGHT - BOTTOM - (y - y0) / (y1 - y0) * (HEIGHT - TOP - BOTTOM);

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let (xa, xb, ya, yb) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        w,
        r#"<path d="M{xa} {ya} L{xa} {yb} L{xb} {yb}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let t = t0 + f * (t1 - t0);
        let y = y0 + f * (y1 - y0);
        let (x, yy) = (px(t), py(y));
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            yb + 5.0,
            yb + 18.0,
            format_tick(t)
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{yy:.2}" x2="{xa}" y2="{yy:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            xa - 5.0,
            xa - 8.0,
            yy + 4.0,
            format_tick(y)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">t</text>"#,
        (xa + xb) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {:.2})">trace</text>"#,
        (ya + yb) / 2.0,
        (ya + yb) / 2.0
    );

    for (i, (_, color)) in SERIES.iter().enumerate() {
        let points: Vec<String> = shown
            .iter()
            .map(|r| {
                let v = [r.trace_geometric_mean, r.trace_exp_convex, r.trace_product][i];
                format!("{:.2},{:.2}", px(r.t), py(v))
            })
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
    }
    for r in shown
        .iter()
        .filter(|r| matches!(r.status, RowStatus::Violated(_)))
    {
        let _ = writeln!(
            w,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"><title>ordering violated at t = {}</title></circle>"#,
            px(r.t),
            py(r.trace_geometric_mean),
            r.t
        );
    }

    // legend
    for (i, (label, color)) in SERIES.iter().enumerate() {
        let y = TOP + 15.0 + 18.0 * i as f64;
        let x = LEFT + 15.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 25.0,
            x + 32.0,
            y + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(w, "</svg>");
    s
}

fn format_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1e3).round() / 1e3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, HermitianMatrix};

    fn pauli() -> HermitianPair {
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        HermitianPair::new(
            HermitianMatrix::new(z).unwrap(),
            HermitianMatrix::new(x).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn endpoints_pass_through_exponentials() {
        let rows = sweep_pair(&pauli(), &[0.0, 1.0]);
        let two_cosh = 2.0 * 1f64.cosh();
        for r in &rows {
            for v in [r.trace_geometric_mean, r.trace_exp_convex, r.trace_product] {
                assert!((v - two_cosh).abs() <= 1e-12 * two_cosh);
            }
            assert_eq!(r.status, RowStatus::Ok);
        }
    }

    #[test]
    fn midpoint_matches_closed_forms() {
        let rows = sweep_pair(&pauli(), &[0.5]);
        // e^{(σz+σx)/2} has eigenvalues e^{±1/√2}
        let exp = 2.0 * std::f64::consts::FRAC_1_SQRT_2.cosh();
        assert!((rows[0].trace_exp_convex - exp).abs() <= 1e-12 * exp);
        // Tr e^{σz/2} e^{σx/2} = 2 cosh²(1/2)
        let product = 2.0 * 0.5f64.cosh().powi(2);
        assert!((rows[0].trace_product - product).abs() <= 1e-12 * product);
    }

    #[test]
    fn overflow_rows_are_marked() {
        let rows = sweep_pair(&pauli().scaled(400.0), &[-3.0, 0.5]);
        assert_eq!(rows[0].status, RowStatus::Overflow);
        let csv = sweep_csv(&rows);
        assert!(
            csv.lines().nth(1).unwrap().ends_with(",,,,overflow"),
            "{csv}"
        );
        let svg = sweep_svg(&rows, "x");
        assert_eq!(svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn csv_uses_round_trip_numbers() {
        let rows = sweep_pair(&pauli(), &[0.1]);
        let csv = sweep_csv(&rows);
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "0.1");
        let back: f64 = fields[1].parse().unwrap();
        assert_eq!(back, rows[0].trace_geometric_mean);
        assert_eq!(fields[4], "interior");
    }
}
