//! Sliding-window construction: 12 months of features in, the rust bit
//! at `lead` months past the window end as the target.

use crate::data::align::AlignedSeries;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Input window length in months.
pub const WINDOW_MONTHS: usize = 12;
/// Largest supported predictive lead, in months.
pub const MAX_LEAD: u8 = 6;

/// One training instance. `x` holds the window months as rows (month
/// `t` first); the label is the rust indicator at month `t + 11 + lead`.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub x: Matrix,
    pub label: bool,
    pub lead: u8,
    pub region_id: String,
    pub anchor_year: i32,
    pub anchor_month: u8,
}

/// Windows over one series at the given lead. An anchor `t` yields an
/// example when months `t..t+11` exist and month `t+11+lead` carries a
/// label; for a fully labeled series of length N that is
/// `max(0, N - 11 - lead)` examples.
pub fn build_windows(series: &AlignedSeries, lead: u8) -> Result<Vec<Example>> {
    build_windows_opts(series, lead, false)
}

/// `history_channel` appends the previous month's rust indicator as one
/// extra feature column (0.0 where unknown), lagged one month so the
/// window never contains the label it predicts.
pub fn build_windows_opts(
    series: &AlignedSeries,
    lead: u8,
    history_channel: bool,
) -> Result<Vec<Example>> {
    if lead > MAX_LEAD {
        return Err(Error::InvalidConfig(format!(
            "lead {lead} out of range 0-{MAX_LEAD}"
        )));
    }
    let n = series.len();
    let lead_us = lead as usize;
    let mut out = Vec::new();
    if n < WINDOW_MONTHS + lead_us {
        return Ok(out);
    }
    let width = series.features.first().map_or(0, Vec::len);
    for t in 0..=(n - WINDOW_MONTHS - lead_us) {
        let label_idx = t + WINDOW_MONTHS - 1 + lead_us;
        let Some(label) = series.labels[label_idx] else {
            continue;
        };
        let cols = if history_channel { width + 1 } else { width };
        let mut data = Vec::with_capacity(WINDOW_MONTHS * cols);
        for m in t..t + WINDOW_MONTHS {
            data.extend_from_slice(&series.features[m]);
            if history_channel {
                let prev = if m == 0 { None } else { series.labels[m - 1] };
                data.push(match prev {
                    Some(true) => 1.0,
                    Some(false) => 0.0,
                    None => 0.0,
                });
            }
        }
        let (anchor_year, anchor_month) = series.month_at(t);
        out.push(Example {
            x: Matrix::from_vec(WINDOW_MONTHS, cols, data)?,
            label,
            lead,
            region_id: series.region_id.clone(),
            anchor_year,
            anchor_month,
        });
    }
    Ok(out)
}

/// Row-major flattening, month `t` features first; length `12 * F`.
pub fn flatten_for_fcnn(example: &Example) -> Vec<f64> {
    example.x.data().to_vec()
}
