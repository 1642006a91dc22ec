//! Data pipeline: CSV ingestion, per-region month alignment, sliding
//! windows at predictive leads 0-6, z-score normalization and seeded
//! train/validation splits.

pub mod align;
pub mod csv;
pub mod normalize;
pub mod pipeline;
pub mod split;
pub mod window;

pub use align::{align, AlignedSeries, IngestWarnings};
pub use csv::{
    parse_survey_csv, parse_survey_reader, parse_weather_csv, parse_weather_reader,
    write_survey_csv, write_weather_csv, SurveyTable, WeatherTable, N_FEATURES,
};
pub use normalize::{apply_norm, apply_norm_all, fit_norm_stats, NormStats, STD_FLOOR};
pub use pipeline::{prepare, prepare_examples, prepare_with_stats, PipelineOptions, PreparedData};
pub use split::{class_stats, random_split, region_split, ClassStats, DatasetSplit, SplitMode};
pub use window::{build_windows, build_windows_opts, flatten_for_fcnn, Example, MAX_LEAD, WINDOW_MONTHS};
