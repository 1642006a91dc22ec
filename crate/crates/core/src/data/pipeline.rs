//! End-to-end example preparation shared by the train, eval and sweep
//! commands: align tables, window at the requested lead, split, then
//! fit z-score statistics on the training side only.

use crate::data::align::{align, IngestWarnings};
use crate::data::csv::{SurveyTable, WeatherTable};
use crate::data::normalize::{apply_norm_all, fit_norm_stats, NormStats};
use crate::data::split::{class_stats, random_split, region_split, ClassStats, DatasetSplit, SplitMode};
use crate::data::window::{build_windows_opts, Example};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub lead: u8,
    pub history_channel: bool,
    pub split_mode: SplitMode,
    pub val_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct PreparedData {
    pub split: DatasetSplit,
    pub norm: NormStats,
    pub warnings: IngestWarnings,
    pub train_stats: ClassStats,
    pub val_stats: ClassStats,
}

/// Windows in canonical order (region, then anchor month), unnormalized.
pub fn prepare_examples(
    weather: &WeatherTable,
    survey: &SurveyTable,
    lead: u8,
    history_channel: bool,
) -> Result<(Vec<Example>, IngestWarnings)> {
    let (series, warnings) = align(weather, survey);
    let mut examples = Vec::new();
    for s in &series {
        examples.extend(build_windows_opts(s, lead, history_channel)?);
    }
    if examples.is_empty() {
        return Err(Error::NoExamples { lead });
    }
    Ok((examples, warnings))
}

/// Full preparation: windows, split, training-only normalization
/// statistics applied to both sides.
pub fn prepare(
    weather: &WeatherTable,
    survey: &SurveyTable,
    opts: &PipelineOptions,
) -> Result<PreparedData> {
    let (examples, warnings) = prepare_examples(weather, survey, opts.lead, opts.history_channel)?;
    let mut split = match opts.split_mode {
        SplitMode::Example => random_split(examples, opts.val_fraction, opts.seed)?,
        SplitMode::Region => region_split(examples, opts.val_fraction, opts.seed)?,
    };
    let norm = fit_norm_stats(&split.train)?;
    apply_norm_all(&norm, &mut split.train)?;
    apply_norm_all(&norm, &mut split.val)?;
    let train_stats = class_stats(&split.train);
    let val_stats = class_stats(&split.val);
    Ok(PreparedData {
        split,
        norm,
        warnings,
        train_stats,
        val_stats,
    })
}

/// Rebuild the evaluation split for a stored checkpoint: same windows,
/// same seeded split, but normalization comes from the checkpoint's
/// stored statistics instead of being refit.
pub fn prepare_with_stats(
    weather: &WeatherTable,
    survey: &SurveyTable,
    opts: &PipelineOptions,
    norm: &NormStats,
) -> Result<PreparedData> {
    let (examples, warnings) = prepare_examples(weather, survey, opts.lead, opts.history_channel)?;
    let mut split = match opts.split_mode {
        SplitMode::Example => random_split(examples, opts.val_fraction, opts.seed)?,
        SplitMode::Region => region_split(examples, opts.val_fraction, opts.seed)?,
    };
    apply_norm_all(norm, &mut split.train)?;
    apply_norm_all(norm, &mut split.val)?;
    let train_stats = class_stats(&split.train);
    let val_stats = class_stats(&split.val);
    Ok(PreparedData {
        split,
        norm: norm.clone(),
        warnings,
        train_stats,
        val_stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn tiny_tables(n_months: usize) -> (WeatherTable, SurveyTable) {
        let mut weather = BTreeMap::new();
        let mut survey = BTreeMap::new();
        for region in ["a", "b"] {
            for m in 0..n_months {
                let year = 2020 + (m / 12) as i32;
                let month = (m % 12 + 1) as u8;
                weather.insert(
                    (region.to_string(), year, month),
                    vec![m as f64, -(m as f64)],
                );
                survey.insert((region.to_string(), year, month), m % 5 == 0);
            }
        }
        (
            WeatherTable {
                feature_names: vec!["t".to_string(), "h".to_string()],
                records: weather,
            },
            SurveyTable { records: survey },
        )
    }

    #[test]
    fn no_examples_for_long_lead_on_short_data() {
        let (weather, survey) = tiny_tables(12);
        let err = prepare_examples(&weather, &survey, 6, false).unwrap_err();
        assert!(matches!(err, Error::NoExamples { lead: 6 }));
    }

    #[test]
    fn normalization_statistics_come_from_train_only() {
        let (weather, survey) = tiny_tables(40);
        let opts = PipelineOptions {
            lead: 0,
            history_channel: false,
            split_mode: SplitMode::Example,
            val_fraction: 0.25,
            seed: 5,
        };
        let prepared = prepare(&weather, &survey, &opts).unwrap();

        // Refit from the (already normalized) train side: mean ~0, std ~1.
        let refit = fit_norm_stats(&prepared.split.train).unwrap();
        for (m, s) in refit.mean.iter().zip(&refit.std) {
            assert!(m.abs() < 1e-9);
            assert!((s - 1.0).abs() < 1e-9);
        }
        // The val side keeps the train transform, so it is generally not
        // exactly standardized.
        assert_eq!(
            prepared.split.train.len() + prepared.split.val.len(),
            2 * (40 - 11)
        );
    }

    #[test]
    fn prepared_split_is_deterministic() {
        let (weather, survey) = tiny_tables(30);
        let opts = PipelineOptions {
            lead: 2,
            history_channel: false,
            split_mode: SplitMode::Example,
            val_fraction: 0.2,
            seed: 11,
        };
        let a = prepare(&weather, &survey, &opts).unwrap();
        let b = prepare(&weather, &survey, &opts).unwrap();
        assert_eq!(a.split.train.len(), b.split.train.len());
        for (x, y) in a.split.train.iter().zip(&b.split.train) {
            assert_eq!(x, y);
        }
        assert_eq!(a.norm, b.norm);
    }
}
