//! Weather and survey CSV ingestion.
//!
//! `weather.csv`: header `region_id,year,month,<f1>,...,<f43>`, one row
//! per region-month, 43 finite feature values.
//! `survey.csv`: header `region_id,year,month,rust_present` with
//! `rust_present` in {0, 1}.
//!
//! Both parsers accept any `Read` so they can run against untrusted
//! byte buffers; all malformed input maps to typed errors, never panics.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Weather feature channels per region-month.
pub const N_FEATURES: usize = 43;

pub type MonthKey = (String, i32, u8);

#[derive(Debug, Clone, PartialEq)]
pub struct WeatherTable {
    pub feature_names: Vec<String>,
    pub records: BTreeMap<MonthKey, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurveyTable {
    pub records: BTreeMap<MonthKey, bool>,
}

pub fn parse_weather_csv(path: &Path) -> Result<WeatherTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_weather_reader(file)
}

pub fn parse_weather_reader<R: Read>(input: R) -> Result<WeatherTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);

    let headers = reader.headers().map_err(csv_to_error)?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() != 3 + N_FEATURES {
        return Err(Error::BadHeader(format!(
            "expected {} columns (region_id,year,month + {} features), found {}",
            3 + N_FEATURES,
            N_FEATURES,
            cols.len()
        )));
    }
    if cols[0] != "region_id" || cols[1] != "year" || cols[2] != "month" {
        return Err(Error::BadHeader(
            "first columns must be region_id,year,month".to_string(),
        ));
    }
    let feature_names: Vec<String> = cols[3..].iter().map(|s| s.to_string()).collect();

    let mut records = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_to_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 + N_FEATURES {
            return Err(Error::MissingFeature {
                line,
                expected: N_FEATURES,
                found: record.len().saturating_sub(3),
            });
        }
        let key = parse_key(&record, line)?;
        let mut features = Vec::with_capacity(N_FEATURES);
        for (i, raw) in record.iter().skip(3).enumerate() {
            let value: f64 = raw.trim().parse().map_err(|_| Error::NonFiniteValue {
                line,
                column: feature_names[i].clone(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    line,
                    column: feature_names[i].clone(),
                });
            }
            features.push(value);
        }
        if records.insert(key.clone(), features).is_some() {
            return Err(Error::DuplicateKey {
                line,
                key: format!("({}, {}, {})", key.0, key.1, key.2),
            });
        }
    }
    Ok(WeatherTable {
        feature_names,
        records,
    })
}

pub fn parse_survey_csv(path: &Path) -> Result<SurveyTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_survey_reader(file)
}

pub fn parse_survey_reader<R: Read>(input: R) -> Result<SurveyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);

    let headers = reader.headers().map_err(csv_to_error)?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols != ["region_id", "year", "month", "rust_present"] {
        return Err(Error::BadHeader(
            "expected region_id,year,month,rust_present".to_string(),
        ));
    }

    let mut records = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_to_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(Error::BadRecord {
                line,
                message: format!("expected 4 columns, found {}", record.len()),
            });
        }
        let key = parse_key(&record, line)?;
        let label = match record.get(3).unwrap_or("").trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::BadLabel {
                    line,
                    value: other.to_string(),
                })
            }
        };
        if records.insert(key.clone(), label).is_some() {
            return Err(Error::DuplicateKey {
                line,
                key: format!("({}, {}, {})", key.0, key.1, key.2),
            });
        }
    }
    Ok(SurveyTable { records })
}

fn parse_key(record: &csv::StringRecord, line: u64) -> Result<MonthKey> {
    let region = record.get(0).unwrap_or("").trim();
    if region.is_empty() {
        return Err(Error::BadRecord {
            line,
            message: "empty region_id".to_string(),
        });
    }
    let year: i32 = record
        .get(1)
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| Error::BadRecord {
            line,
            message: "year must be an integer".to_string(),
        })?;
    let month: u8 = record
        .get(2)
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| Error::BadRecord {
            line,
            message: "month must be an integer".to_string(),
        })?;
    if !(1..=12).contains(&month) {
        return Err(Error::BadRecord {
            line,
            message: format!("month {month} out of range 1-12"),
        });
    }
    Ok((region.to_string(), year, month))
}

fn csv_to_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, csv::Position::line);
    Error::BadRecord {
        line,
        message: e.to_string(),
    }
}

/// Serialize in canonical (region, year, month) order. Floats use the
/// shortest representation that round-trips exactly.
pub fn write_weather_csv(table: &WeatherTable) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["region_id".to_string(), "year".to_string(), "month".to_string()];
    header.extend(table.feature_names.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for ((region, year, month), features) in &table.records {
        let mut row = vec![region.clone(), year.to_string(), month.to_string()];
        row.extend(features.iter().map(ToString::to_string));
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_survey_csv(table: &SurveyTable) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["region_id", "year", "month", "rust_present"])
        .expect("in-memory write");
    for ((region, year, month), label) in &table.records {
        w.write_record([
            region.as_str(),
            &year.to_string(),
            &month.to_string(),
            if *label { "1" } else { "0" },
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
