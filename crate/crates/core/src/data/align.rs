//! Join weather and survey tables into per-region month series.
//!
//! Runs are maximal stretches of consecutive months with weather data;
//! a missing month splits the region into separate series rather than
//! being imputed. Survey labels attach where the key matches; survey
//! rows with no weather month are counted as ingest warnings.

use crate::data::csv::{MonthKey, SurveyTable, WeatherTable};

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSeries {
    pub region_id: String,
    pub start_year: i32,
    /// 1-12.
    pub start_month: u8,
    /// One feature vector per consecutive month.
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Option<bool>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestWarnings {
    pub orphan_survey_rows: usize,
    pub gap_splits: usize,
    /// First few orphan keys, for the log.
    pub orphan_examples: Vec<MonthKey>,
}

impl IngestWarnings {
    pub fn is_clean(&self) -> bool {
        self.orphan_survey_rows == 0 && self.gap_splits == 0
    }

    pub fn to_log(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("orphan_survey_rows {}\n", self.orphan_survey_rows));
        out.push_str(&format!("gap_splits {}\n", self.gap_splits));
        for (region, year, month) in &self.orphan_examples {
            out.push_str(&format!("orphan {region} {year}-{month:02}\n"));
        }
        out
    }
}

fn abs_month(year: i32, month: u8) -> i64 {
    year as i64 * 12 + (month as i64 - 1)
}

fn from_abs(abs: i64) -> (i32, u8) {
    (abs.div_euclid(12) as i32, (abs.rem_euclid(12) + 1) as u8)
}

impl AlignedSeries {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Calendar (year, month) of the series month at `idx`.
    pub fn month_at(&self, idx: usize) -> (i32, u8) {
        from_abs(abs_month(self.start_year, self.start_month) + idx as i64)
    }
}

/// Output is canonical: sorted by region, then series start month.
pub fn align(weather: &WeatherTable, survey: &SurveyTable) -> (Vec<AlignedSeries>, IngestWarnings) {
    let mut warnings = IngestWarnings::default();
    let mut series = Vec::new();

    let mut current: Option<AlignedSeries> = None;
    let mut last_key: Option<(&str, i64)> = None;
    for ((region, year, month), features) in &weather.records {
        let abs = abs_month(*year, *month);
        let continues = matches!(last_key, Some((r, a)) if r == region && a + 1 == abs);
        if !continues {
            if let Some(s) = current.take() {
                if matches!(last_key, Some((r, _)) if r == region) {
                    warnings.gap_splits += 1;
                }
                series.push(s);
            }
            current = Some(AlignedSeries {
                region_id: region.clone(),
                start_year: *year,
                start_month: *month,
                features: Vec::new(),
                labels: Vec::new(),
            });
        }
        let s = current.as_mut().expect("run in progress");
        s.features.push(features.clone());
        s.labels
            .push(survey.records.get(&(region.clone(), *year, *month)).copied());
        last_key = Some((region, abs));
    }
    if let Some(s) = current.take() {
        series.push(s);
    }

    for key in survey.records.keys() {
        if !weather.records.contains_key(key) {
            warnings.orphan_survey_rows += 1;
            if warnings.orphan_examples.len() < 10 {
                warnings.orphan_examples.push(key.clone());
            }
        }
    }

    (series, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn weather_with_months(months: &[(i32, u8)]) -> WeatherTable {
        let mut records = BTreeMap::new();
        for &(y, m) in months {
            records.insert(("r1".to_string(), y, m), vec![y as f64 + m as f64]);
        }
        WeatherTable {
            feature_names: vec!["f00".to_string()],
            records,
        }
    }

    #[test]
    fn complete_year_is_one_series() {
        let months: Vec<(i32, u8)> = (1..=12).map(|m| (2020, m)).collect();
        let (series, warnings) = align(&weather_with_months(&months), &SurveyTable::default());
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].len(), 12);
        assert_eq!(series[0].month_at(0), (2020, 1));
        assert_eq!(series[0].month_at(11), (2020, 12));
        assert!(warnings.is_clean());
    }

    #[test]
    fn gap_splits_into_two_runs() {
        let months: Vec<(i32, u8)> = (1..=12).filter(|&m| m != 6).map(|m| (2020, m)).collect();
        let (series, warnings) = align(&weather_with_months(&months), &SurveyTable::default());
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].len(), 5); // Jan-May
        assert_eq!(series[1].len(), 6); // Jul-Dec
        assert_eq!(series[1].month_at(0), (2020, 7));
        assert_eq!(warnings.gap_splits, 1);
    }

    #[test]
    fn year_boundary_is_consecutive() {
        let months = [(2019, 12), (2020, 1), (2020, 2)];
        let (series, _) = align(&weather_with_months(&months), &SurveyTable::default());
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].month_at(1), (2020, 1));
    }

    #[test]
    fn orphan_survey_rows_are_counted_not_fatal() {
        let weather = weather_with_months(&[(2020, 1)]);
        let mut survey = SurveyTable::default();
        survey.records.insert(("r1".to_string(), 2020, 1), true);
        survey.records.insert(("r1".to_string(), 2020, 7), false); // no weather
        let (series, warnings) = align(&weather, &survey);
        assert_eq!(series[0].labels, vec![Some(true)]);
        assert_eq!(warnings.orphan_survey_rows, 1);
        assert_eq!(warnings.orphan_examples, vec![("r1".to_string(), 2020, 7)]);
    }

    #[test]
    fn labels_attach_by_month_and_missing_become_none() {
        let weather = weather_with_months(&[(2020, 1), (2020, 2)]);
        let mut survey = SurveyTable::default();
        survey.records.insert(("r1".to_string(), 2020, 2), true);
        let (series, _) = align(&weather, &survey);
        assert_eq!(series[0].labels, vec![None, Some(true)]);
    }

    #[test]
    fn regions_with_no_weather_yield_no_series() {
        let (series, _) = align(
            &WeatherTable {
                feature_names: vec![],
                records: BTreeMap::new(),
            },
            &SurveyTable::default(),
        );
        assert!(series.is_empty());
    }
}
