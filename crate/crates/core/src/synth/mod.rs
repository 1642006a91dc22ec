//! Seeded synthetic weather/survey generator with a planted, lag-local
//! logistic relationship between weather channels and the rust label.
//!
//! The 43 channels are seasonal sinusoids (period 12) plus a per-region
//! offset and white noise, grouped into temperature-, humidity-, rain-
//! and wind-like families. The label probability at month `m` is
//! `logistic(alpha + strength * s(m))` where `s(m)` is a fixed linear
//! score of three designated channels at lags 0-2; `alpha` is calibrated
//! by bisection so the mean latent probability hits the configured
//! prevalence. Because the dependence only looks backwards from `m`,
//! predicting farther past the window end carries strictly weaker
//! signal, which is what the lead-sweep experiments probe.
//!
//! `ground-truth.csv` (per-month latent probability and score) exists
//! for oracle-based tests only; training paths never read it.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::Read;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::csv::{MonthKey, SurveyTable, WeatherTable, N_FEATURES};
use crate::error::{Error, Result};
use crate::nn::activation::sigmoid;
use crate::rng::{derive_seed, rng_from_seed};

pub const START_YEAR: i32 = 2015;
pub const START_MONTH: u8 = 1;

/// Channels whose recent values drive the label, with their weights.
const SCORE_CHANNELS: [(usize, f64); 3] = [(0, 1.0), (11, 0.8), (22, -0.6)];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_regions: usize,
    pub n_months: usize,
    pub seed: u64,
    pub target_prevalence: f64,
    /// Logistic coefficient on the standardized score; 0 plants no signal.
    pub signal_strength: f64,
    /// Backward lags (months) of the planted dependence.
    pub lag_profile: Vec<u8>,
    pub noise_std: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_regions: 20,
            n_months: 120,
            seed: 42,
            target_prevalence: 0.2,
            signal_strength: 10.0,
            lag_profile: vec![0, 1, 2],
            noise_std: 1.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_regions == 0 {
            return Err(Error::InvalidConfig("synth needs at least 1 region".into()));
        }
        if self.n_months < 19 {
            return Err(Error::InvalidConfig(
                "synth needs at least 19 months so every lead 0-6 yields examples".into(),
            ));
        }
        if !(self.target_prevalence > 0.0 && self.target_prevalence < 1.0) {
            return Err(Error::InvalidConfig("target_prevalence must be in (0, 1)".into()));
        }
        if self.lag_profile.is_empty() || self.lag_profile.iter().any(|&l| l > 11) {
            return Err(Error::InvalidConfig("lag_profile entries must be 0-11".into()));
        }
        if self.signal_strength < 0.0 || !self.signal_strength.is_finite() {
            return Err(Error::InvalidConfig("signal_strength must be >= 0".into()));
        }
        if self.noise_std < 0.0 || !self.noise_std.is_finite() {
            return Err(Error::InvalidConfig("noise_std must be >= 0".into()));
        }
        Ok(())
    }

    pub fn region_id(i: usize) -> String {
        format!("region_{i:02}")
    }
}

struct ChannelPlan {
    name: String,
    base: f64,
    amp: f64,
    phase: f64,
    noise: f64,
    region_offset_scale: f64,
}

fn channel_plans(cfg: &SynthConfig) -> Vec<ChannelPlan> {
    // (family, count, base, spread, amp, noise, region offset scale)
    let families: [(&str, usize, f64, f64, f64, f64, f64); 4] = [
        ("temp", 11, 10.0, 4.0, 7.0, 1.2, 2.0),
        ("hum", 11, 75.0, 10.0, 8.0, 4.0, 5.0),
        ("rain", 11, 60.0, 20.0, 20.0, 8.0, 10.0),
        ("wind", 10, 15.0, 5.0, 4.0, 2.0, 3.0),
    ];
    let mut rng = rng_from_seed(derive_seed(cfg.seed, "channels", 0));
    let mut plans = Vec::with_capacity(N_FEATURES);
    for (family, count, base, spread, amp, noise, offset) in families {
        for i in 0..count {
            let u_amp: f64 = rng.random();
            let u_phase: f64 = rng.random();
            let u_base: f64 = rng.random();
            plans.push(ChannelPlan {
                name: format!("{family}_{i:02}"),
                base: base + spread * (u_base - 0.5),
                amp: amp * (0.6 + 0.8 * u_amp),
                phase: TAU * u_phase,
                noise: noise * cfg.noise_std,
                region_offset_scale: offset,
            });
        }
    }
    debug_assert_eq!(plans.len(), N_FEATURES);
    plans
}

/// Standard normal via Box-Muller on the seeded uniform stream.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
}

fn month_key(region: &str, index: usize) -> MonthKey {
    let abs = START_YEAR as i64 * 12 + (START_MONTH as i64 - 1) + index as i64;
    (
        region.to_string(),
        abs.div_euclid(12) as i32,
        (abs.rem_euclid(12) + 1) as u8,
    )
}

/// Generate the weather table: one row per region-month, 43 channels.
pub fn gen_weather(cfg: &SynthConfig) -> Result<WeatherTable> {
    cfg.validate()?;
    let plans = channel_plans(cfg);
    let mut records = BTreeMap::new();
    for r in 0..cfg.n_regions {
        let region = SynthConfig::region_id(r);
        let mut rng = rng_from_seed(derive_seed(cfg.seed, "weather", r as u64));
        let offsets: Vec<f64> = plans
            .iter()
            .map(|p| p.region_offset_scale * (rng.random::<f64>() - 0.5))
            .collect();
        for m in 0..cfg.n_months {
            let mut row = Vec::with_capacity(N_FEATURES);
            for (plan, offset) in plans.iter().zip(&offsets) {
                let seasonal = plan.amp * (TAU * m as f64 / 12.0 + plan.phase).sin();
                row.push(plan.base + offset + seasonal + plan.noise * normal(&mut rng));
            }
            records.insert(month_key(&region, m), row);
        }
    }
    Ok(WeatherTable {
        feature_names: plans.into_iter().map(|p| p.name).collect(),
        records,
    })
}

/// Latent probability and standardized score per region-month.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub records: BTreeMap<MonthKey, TruthRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthRow {
    pub prob: f64,
    pub score: f64,
}

/// Draw labels from the planted logistic model and return the ground
/// truth used by oracle tests.
pub fn gen_labels(cfg: &SynthConfig, weather: &WeatherTable) -> Result<(SurveyTable, GroundTruth)> {
    cfg.validate()?;

    // Group month values per region in chronological order.
    let mut per_region: BTreeMap<&str, Vec<(&MonthKey, &Vec<f64>)>> = BTreeMap::new();
    for (key, row) in &weather.records {
        per_region.entry(key.0.as_str()).or_default().push((key, row));
    }

    // Raw score: weighted sum of the designated channels at the
    // configured backward lags (clamped at the series start).
    let mut keys = Vec::new();
    let mut raw = Vec::new();
    for months in per_region.values() {
        for (idx, (key, _)) in months.iter().enumerate() {
            let mut s = 0.0;
            for (li, &lag) in cfg.lag_profile.iter().enumerate() {
                let lag_w = 1.0 / (1.0 + li as f64);
                let src = idx.saturating_sub(lag as usize);
                for (chan, w) in SCORE_CHANNELS {
                    s += lag_w * w * months[src].1[chan];
                }
            }
            keys.push((*key).clone());
            raw.push(s);
        }
    }
    if raw.is_empty() {
        return Ok((SurveyTable::default(), GroundTruth::default()));
    }

    // Standardize so signal_strength has a stable meaning.
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt().max(1e-12);
    let scores: Vec<f64> = raw.iter().map(|v| (v - mean) / std).collect();

    let alpha = calibrate_alpha(&scores, cfg.signal_strength, cfg.target_prevalence);

    let mut truth = GroundTruth::default();
    let mut survey = SurveyTable::default();
    let mut region_rngs: BTreeMap<String, ChaCha8Rng> = BTreeMap::new();
    let region_index: BTreeMap<&str, u64> = per_region
        .keys()
        .enumerate()
        .map(|(i, r)| (*r, i as u64))
        .collect();
    for (key, score) in keys.iter().zip(&scores) {
        let prob = sigmoid(alpha + cfg.signal_strength * score);
        let rng = region_rngs.entry(key.0.clone()).or_insert_with(|| {
            rng_from_seed(derive_seed(cfg.seed, "labels", region_index[key.0.as_str()]))
        });
        let label = rng.random::<f64>() < prob;
        truth.records.insert(key.clone(), TruthRow { prob, score: *score });
        survey.records.insert(key.clone(), label);
    }
    Ok((survey, truth))
}

/// Bisection on the intercept so the mean latent probability matches the
/// target within 5e-3.
fn calibrate_alpha(scores: &[f64], strength: f64, target: f64) -> f64 {
    let mean_prob = |alpha: f64| -> f64 {
        scores.iter().map(|&s| sigmoid(alpha + strength * s)).sum::<f64>() / scores.len() as f64
    };
    let (mut lo, mut hi) = (-60.0, 60.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = mean_prob(mid);
        if (p - target).abs() <= 5e-3 {
            return mid;
        }
        if p < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Convenience wrapper producing all three tables.
pub struct SynthData {
    pub weather: WeatherTable,
    pub survey: SurveyTable,
    pub truth: GroundTruth,
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthData> {
    let weather = gen_weather(cfg)?;
    let (survey, truth) = gen_labels(cfg, &weather)?;
    Ok(SynthData {
        weather,
        survey,
        truth,
    })
}

pub fn write_ground_truth_csv(truth: &GroundTruth) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["region_id", "year", "month", "latent_prob", "score"])
        .expect("in-memory write");
    for ((region, year, month), row) in &truth.records {
        w.write_record([
            region.as_str(),
            &year.to_string(),
            &month.to_string(),
            &row.prob.to_string(),
            &row.score.to_string(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn parse_ground_truth_reader<R: Read>(input: R) -> Result<GroundTruth> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| Error::BadRecord {
        line: 1,
        message: e.to_string(),
    })?;
    let cols: Vec<&str> = headers.iter().collect();
    if cols != ["region_id", "year", "month", "latent_prob", "score"] {
        return Err(Error::BadHeader(
            "expected region_id,year,month,latent_prob,score".to_string(),
        ));
    }
    let mut truth = GroundTruth::default();
    for record in reader.records() {
        let record = record.map_err(|e| Error::BadRecord {
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 5 {
            return Err(Error::BadRecord {
                line,
                message: format!("expected 5 columns, found {}", record.len()),
            });
        }
        let region = record.get(0).unwrap_or("").trim().to_string();
        if region.is_empty() {
            return Err(Error::BadRecord {
                line,
                message: "empty region_id".to_string(),
            });
        }
        let year: i32 = record.get(1).unwrap_or("").trim().parse().map_err(|_| {
            Error::BadRecord {
                line,
                message: "year must be an integer".to_string(),
            }
        })?;
        let month: u8 = record.get(2).unwrap_or("").trim().parse().map_err(|_| {
            Error::BadRecord {
                line,
                message: "month must be an integer".to_string(),
            }
        })?;
        if !(1..=12).contains(&month) {
            return Err(Error::BadRecord {
                line,
                message: format!("month {month} out of range"),
            });
        }
        let parse_float = |col: usize, name: &str| -> Result<f64> {
            let v: f64 = record
                .get(col)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::NonFiniteValue {
                    line,
                    column: name.to_string(),
                })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteValue {
                    line,
                    column: name.to_string(),
                })
            }
        };
        let prob = parse_float(3, "latent_prob")?;
        let score = parse_float(4, "score")?;
        if truth
            .records
            .insert((region.clone(), year, month), TruthRow { prob, score })
            .is_some()
        {
            return Err(Error::DuplicateKey {
                line,
                key: format!("({region}, {year}, {month})"),
            });
        }
    }
    Ok(truth)
}

/// Rank-based AUC (Mann-Whitney) with average ranks for ties. `None`
/// when either class is empty.
pub fn auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    assert_eq!(scores.len(), labels.len(), "auc input lengths");
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Average 1-based rank for the tie group [i, j].
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

/// Oracle AUC at a given lead: rank candidate windows by the true score
/// at their final month and compare against the label at `lead` months
/// later. Assumes the synthetic layout (consecutive months per region).
pub fn oracle_auc_at_lead(truth: &GroundTruth, survey: &SurveyTable, lead: u8) -> Option<f64> {
    use crate::data::window::WINDOW_MONTHS;
    let mut per_region: BTreeMap<&str, Vec<&MonthKey>> = BTreeMap::new();
    for key in truth.records.keys() {
        per_region.entry(key.0.as_str()).or_default().push(key);
    }
    let mut scores = Vec::new();
    let mut labels = Vec::new();
    for months in per_region.values() {
        let n = months.len();
        if n < WINDOW_MONTHS + lead as usize {
            continue;
        }
        for t in 0..=(n - WINDOW_MONTHS - lead as usize) {
            let window_end = months[t + WINDOW_MONTHS - 1];
            let target = months[t + WINDOW_MONTHS - 1 + lead as usize];
            if let Some(&label) = survey.records.get(target) {
                scores.push(truth.records[window_end].score);
                labels.push(label);
            }
        }
    }
    auc(&scores, &labels)
}

/// Fraction of positive labels.
pub fn empirical_prevalence(survey: &SurveyTable) -> Option<f64> {
    if survey.records.is_empty() {
        return None;
    }
    let pos = survey.records.values().filter(|&&l| l).count();
    Some(pos as f64 / survey.records.len() as f64)
}
