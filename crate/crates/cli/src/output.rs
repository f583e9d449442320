use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use fho_core::experiments::SweepResult;
use fho_core::ObservableSeries;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let row: Vec<String> = values.into_iter().map(num).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

pub fn series_csv(series: &ObservableSeries) -> String {
    let n = series.n_states();
    let mut out = String::from("t");
    for k in 0..n {
        let _ = write!(out, ",P{k}");
    }
    out.push_str(",S,E,norm\n");
    for i in 0..series.len() {
        let row = std::iter::once(series.times[i])
            .chain(series.probabilities[i].iter().copied())
            .chain([series.entropy[i], series.energy[i], series.norm[i]]);
        write_row(&mut out, row);
    }
    out
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let with_errors = result.failures() > 0;
    let mut out = String::from("alpha,S_bar_K,S_bar_H,E_bar_K,E_bar_H");
    out.push_str(if with_errors { ",error\n" } else { "\n" });
    for row in &result.rows {
        match &row.result {
            Ok(v) => {
                let cells = [row.alpha, v.s_bar_k, v.s_bar_h, v.e_bar_k, v.e_bar_h].map(num);
                out.push_str(&cells.join(","));
                if with_errors {
                    out.push(',');
                }
            }
            Err(e) => {
                let _ = write!(out, "{},,,,,\"{}\"", num(row.alpha), e.replace('"', "'"));
            }
        }
        out.push('\n');
    }
    out
}

/// Columns `t, x, v, K, W`.
pub fn classical_csv(rows: &[[f64; 5]]) -> String {
    let mut out = String::from("t,x,v,K,W\n");
    for r in rows {
        write_row(&mut out, r.iter().copied());
    }
    out
}

pub fn write(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)
}
