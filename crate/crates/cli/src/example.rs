//! The five-point worked example, printed step by step.

use std::fmt::Write;

use cfgm::fracops::{ceil_order, cfa};
use cfgm::greymodel::{build_design, estimate_params, fit, response, AccumulationKind};
use cfgm::order_search::{brute_force_alpha, SearchSpec};

pub const RAW: [f64; 5] = [55.7, 59.0, 62.7, 61.3, 61.4];
const TABLE_ORDER: f64 = 1.1;
const MODEL_ORDER: f64 = 0.59;
const HORIZON: usize = 5;

fn row(values: &[f64], decimals: usize) -> String {
    values
        .iter()
        .map(|v| format!("{v:.decimals$}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render() -> cfgm::Result<String> {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "raw series x(0) = ({})", row(&RAW, 1));

    let alpha = TABLE_ORDER;
    let shift = ceil_order(alpha) as f64 - alpha;
    let _ = writeln!(
        w,
        "\naccumulation table, conformable, alpha = {alpha}"
    );
    let _ = writeln!(
        w,
        "k, x(0)(k), k^(ceil(a)-a), x(0)(k)/k^(ceil(a)-a), x(a-1)(k), x(a)(k)"
    );
    let weighted: Vec<f64> = RAW
        .iter()
        .enumerate()
        .map(|(j, x)| x / ((j + 1) as f64).powf(shift))
        .collect();
    let partial = cfa(&RAW, alpha - 1.0)?;
    let full = cfa(&RAW, alpha)?;
    for k in 0..RAW.len() {
        let _ = writeln!(
            w,
            "{}, {}, {:.2}, {:.2}, {:.2}, {:.2}",
            k + 1,
            RAW[k],
            ((k + 1) as f64).powf(shift),
            weighted[k],
            partial[k],
            full[k]
        );
    }

    let alpha = MODEL_ORDER;
    let acc = cfa(&RAW, alpha)?;
    let _ = writeln!(w, "\naccumulated series x({alpha}) = ({})", row(&acc, 2));

    let design = build_design(&acc)?;
    let _ = writeln!(w, "\nB =");
    for r in &design.rows {
        let _ = writeln!(w, "  {:.4}, {}", r[0], r[1]);
    }
    let _ = writeln!(w, "Y =");
    for y in &design.targets {
        let _ = writeln!(w, "  {y:.4}");
    }

    let (a, b) = estimate_params(&design)?;
    let _ = writeln!(w, "\n[a, b] = [{a:.4}, {b:.4}]");
    let _ = writeln!(
        w,
        "response x({alpha})(k) = {:.2}e^(-{a:.4}(k-1)) + {:.2}",
        RAW[0] - b / a,
        b / a
    );

    let n = RAW.len() + HORIZON;
    let path: Vec<f64> = (1..=n).map(|k| response(a, b, RAW[0], k)).collect();
    let _ = writeln!(w, "\nresponse k=1..{n} = ({})", row(&path, 2));
    let model = fit(&RAW, alpha, AccumulationKind::Conformable)?;
    let _ = writeln!(
        w,
        "restored k=1..{n} = ({})",
        row(&model.restored_path(HORIZON), 2)
    );
    let _ = writeln!(w, "fitted MAPE = {:.4}%", model.fitted_mape(&RAW)?);

    let best = brute_force_alpha(
        &RAW,
        &SearchSpec::default_for(AccumulationKind::Conformable),
    )?;
    let _ = writeln!(w, "\nalpha* = {}", best.alpha_star);
    let _ = writeln!(w, "MAPE at alpha* = {:.4}%", best.mape_min);
    Ok(out)
}

pub fn print() -> cfgm::Result<()> {
    print!("{}", render()?);
    Ok(())
}
