//! Checkpoint serialization.
//!
//! Layout: a line-oriented text header followed by the literal line
//! `data` and then every parameter as little-endian f64 in canonical
//! block order (see [`crate::nn::model`]). Header keys:
//!
//! ```text
//! rustcast-checkpoint v1
//! arch fcnn|lstm
//! features <F>            feature channels per month
//! input_width <W>         fcnn: window*F flattened; lstm: F
//! hidden <h1,h2,h3>       fcnn hidden widths
//! layers <L> / hidden <H> lstm stack shape
//! seed <u64>              RNG seed the run used (split + init + shuffle)
//! config_hash <hex u64>
//! norm_mean <F comma-separated floats>
//! norm_std <F comma-separated floats>
//! params <count>
//! data
//! ```
//!
//! The header carries no timestamps, so identical runs produce
//! byte-identical checkpoints.

use std::fs;
use std::path::Path;

use crate::data::window::WINDOW_MONTHS;
use crate::error::{Error, Result};
use crate::nn::fcnn::FcnnParams;
use crate::nn::lstm::LstmParams;
use crate::nn::model::{Arch, ModelParams};

const MAGIC: &str = "rustcast-checkpoint v1";
/// Hard caps keep a malformed header from requesting absurd allocations.
const MAX_FEATURES: usize = 4096;
const MAX_WIDTH: usize = 1 << 20;
const MAX_LAYERS: usize = 8;
const MAX_PARAMS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: ModelParams,
    /// Per-feature z-score statistics fitted on the training split.
    pub norm_mean: Vec<f64>,
    pub norm_std: Vec<f64>,
    /// The derived per-run seed (drives split, init and shuffle).
    pub seed: u64,
    pub config_hash: u64,
}

impl Checkpoint {
    pub fn arch(&self) -> Arch {
        self.params.arch()
    }

    pub fn features(&self) -> usize {
        self.norm_mean.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut header = String::new();
        header.push_str(MAGIC);
        header.push('\n');
        header.push_str(&format!("arch {}\n", self.arch()));
        header.push_str(&format!("features {}\n", self.features()));
        header.push_str(&format!("input_width {}\n", self.params.input_width()));
        match &self.params {
            ModelParams::Fcnn(p) => {
                let widths: Vec<String> =
                    p.hidden_widths().iter().map(ToString::to_string).collect();
                header.push_str(&format!("hidden {}\n", widths.join(",")));
            }
            ModelParams::Lstm(p) => {
                header.push_str(&format!("layers {}\n", p.layers.len()));
                header.push_str(&format!("hidden {}\n", p.hidden()));
            }
        }
        header.push_str(&format!("seed {}\n", self.seed));
        header.push_str(&format!("config_hash {:016x}\n", self.config_hash));
        header.push_str(&format!("norm_mean {}\n", join_floats(&self.norm_mean)));
        header.push_str(&format!("norm_std {}\n", join_floats(&self.norm_std)));
        header.push_str(&format!("params {}\n", self.params.param_count()));
        header.push_str("data\n");

        let mut bytes = header.into_bytes();
        for (_, block) in self.params.blocks() {
            for v in block {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Checkpoint> {
        let mut header = HeaderReader::new(bytes);
        let magic = header.next_line()?;
        if magic != MAGIC {
            return Err(bad("unrecognized magic line"));
        }

        let arch = Arch::parse(&header.expect_value("arch")?)
            .map_err(|_| bad("arch must be fcnn or lstm"))?;
        let features = header.expect_usize("features", MAX_FEATURES)?;
        let input_width = header.expect_usize("input_width", MAX_WIDTH)?;

        let shape = match arch {
            Arch::Fcnn => {
                let widths = parse_usize_list(&header.expect_value("hidden")?)?;
                if widths.is_empty() || widths.len() > MAX_LAYERS {
                    return Err(bad("fcnn hidden widths out of range"));
                }
                if widths.iter().any(|&w| w == 0 || w > MAX_WIDTH) {
                    return Err(bad("fcnn hidden width out of range"));
                }
                if input_width != WINDOW_MONTHS * features {
                    return Err(bad("fcnn input_width must equal window * features"));
                }
                Shape::Fcnn(widths)
            }
            Arch::Lstm => {
                let layers = header.expect_usize("layers", MAX_LAYERS)?;
                let hidden = header.expect_usize("hidden", MAX_WIDTH)?;
                if layers == 0 || hidden == 0 {
                    return Err(bad("lstm shape out of range"));
                }
                if input_width != features {
                    return Err(bad("lstm input_width must equal features"));
                }
                Shape::Lstm { layers, hidden }
            }
        };

        let seed: u64 = header
            .expect_value("seed")?
            .parse()
            .map_err(|_| bad("seed must be a u64"))?;
        let config_hash = u64::from_str_radix(&header.expect_value("config_hash")?, 16)
            .map_err(|_| bad("config_hash must be hex"))?;
        let norm_mean = parse_float_list(&header.expect_value("norm_mean")?)?;
        let norm_std = parse_float_list(&header.expect_value("norm_std")?)?;
        if norm_mean.len() != features || norm_std.len() != features {
            return Err(bad("normalization vectors must have one entry per feature"));
        }
        if norm_std.iter().any(|&s| s <= 0.0) {
            return Err(bad("norm_std entries must be positive"));
        }
        let declared_params = header.expect_usize("params", MAX_PARAMS)?;
        if header.next_line()? != "data" {
            return Err(bad("missing data marker"));
        }

        let mut params = match shape {
            Shape::Fcnn(widths) => {
                if input_width == 0 {
                    return Err(bad("input_width must be positive"));
                }
                ModelParams::Fcnn(FcnnParams::zeros(input_width, &widths))
            }
            Shape::Lstm { layers, hidden } => {
                ModelParams::Lstm(LstmParams::zeros(input_width, hidden, layers))
            }
        };
        if params.param_count() != declared_params {
            return Err(bad("declared parameter count does not match shape"));
        }
        if params.param_count() > MAX_PARAMS {
            return Err(bad("parameter count exceeds limit"));
        }

        let body = header.rest();
        let expected_len = declared_params
            .checked_mul(8)
            .ok_or_else(|| bad("parameter count overflow"))?;
        if body.len() != expected_len {
            return Err(bad("parameter payload length does not match header"));
        }
        let mut offset = 0;
        for (_, block) in params.blocks_mut() {
            for slot in block {
                let raw: [u8; 8] = body[offset..offset + 8].try_into().expect("length checked");
                let value = f64::from_le_bytes(raw);
                if !value.is_finite() {
                    return Err(bad("non-finite parameter value"));
                }
                *slot = value;
                offset += 8;
            }
        }

        Ok(Checkpoint {
            params,
            norm_mean,
            norm_std,
            seed,
            config_hash,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

enum Shape {
    Fcnn(Vec<usize>),
    Lstm { layers: usize, hidden: usize },
}

fn bad(msg: &str) -> Error {
    Error::BadCheckpoint(msg.to_string())
}

fn join_floats(vals: &[f64]) -> String {
    vals.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_float_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            let v: f64 = tok.trim().parse().map_err(|_| bad("malformed float list"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad("non-finite value in float list"))
            }
        })
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|tok| tok.trim().parse().map_err(|_| bad("malformed width list")))
        .collect()
}

/// Reads `\n`-terminated header lines from the front of the byte buffer.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        HeaderReader { bytes, pos: 0 }
    }

    fn next_line(&mut self) -> Result<&'a str> {
        let rest = &self.bytes[self.pos..];
        let end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| bad("truncated header"))?;
        self.pos += end + 1;
        std::str::from_utf8(&rest[..end]).map_err(|_| bad("header is not utf-8"))
    }

    fn expect_value(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.to_string()),
            _ => Err(bad(&format!("expected header key {key}"))),
        }
    }

    fn expect_usize(&mut self, key: &str, max: usize) -> Result<usize> {
        let v: usize = self
            .expect_value(key)?
            .parse()
            .map_err(|_| bad(&format!("{key} must be an integer")))?;
        if v > max {
            return Err(bad(&format!("{key} exceeds limit {max}")));
        }
        Ok(v)
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn sample_fcnn() -> Checkpoint {
        let mut rng = rng_from_seed(5);
        Checkpoint {
            params: ModelParams::Fcnn(FcnnParams::with_hidden(WINDOW_MONTHS * 3, &[4, 3, 2], &mut rng)),
            norm_mean: vec![0.25, -1.5, 3.0],
            norm_std: vec![1.0, 0.5, 2.0],
            seed: 99,
            config_hash: 0xdead_beef,
        }
    }

    fn sample_lstm() -> Checkpoint {
        let mut rng = rng_from_seed(6);
        Checkpoint {
            params: ModelParams::Lstm(LstmParams::with_shape(3, 4, 2, &mut rng)),
            norm_mean: vec![0.0, 0.1, 0.2],
            norm_std: vec![1.0, 1.0, 1.0],
            seed: 7,
            config_hash: 1,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        for ckpt in [sample_fcnn(), sample_lstm()] {
            let bytes = ckpt.to_bytes();
            let back = Checkpoint::from_bytes(&bytes).unwrap();
            assert_eq!(back, ckpt);
            // Bit-exact re-serialization.
            assert_eq!(back.to_bytes(), bytes);
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let bytes = sample_fcnn().to_bytes();
        let truncated = &bytes[..bytes.len() - 4];
        assert!(matches!(
            Checkpoint::from_bytes(truncated),
            Err(Error::BadCheckpoint(_))
        ));
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let mut bytes = sample_lstm().to_bytes();
        bytes.push(0);
        assert!(Checkpoint::from_bytes(&bytes).is_err());
    }

    #[test]
    fn bad_magic_and_oversized_shapes_are_rejected() {
        assert!(Checkpoint::from_bytes(b"not a checkpoint\n").is_err());
        let text = format!(
            "{MAGIC}\narch fcnn\nfeatures 99999\ninput_width 12\nhidden 4\nseed 0\nconfig_hash 0\nnorm_mean 0\nnorm_std 1\nparams 10\ndata\n"
        );
        assert!(Checkpoint::from_bytes(text.as_bytes()).is_err());
    }

    #[test]
    fn non_finite_parameters_are_rejected() {
        let ckpt = sample_lstm();
        let mut bytes = ckpt.to_bytes();
        let tail = bytes.len() - 8;
        bytes[tail..].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(
            Checkpoint::from_bytes(&bytes),
            Err(Error::BadCheckpoint(_))
        ));
    }
}
