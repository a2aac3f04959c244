use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::filter::{make_filter, LtiFilter, DEFAULT_TRUNCATION_TOL};
use crate::io::ModelDocument;
use crate::synthesis::{step_variance_profile, TemporalModel};
use crate::{Error, Result, VarianceProfile};

/// Where a variance profile comes from: `paper`, `const:<v>` or `file:<path>`
/// (a model JSON document with a `variance` array).
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    /// The step profile of [`step_variance_profile`], spelled `paper`.
    Step,
    Constant(f64),
    File(PathBuf),
}

impl ProfileSpec {
    pub fn resolve(&self, len: usize) -> Result<VarianceProfile> {
        match self {
            ProfileSpec::Step => step_variance_profile(len),
            ProfileSpec::Constant(v) => VarianceProfile::constant(len, *v),
            ProfileSpec::File(path) => {
                let doc: ModelDocument = serde_json::from_reader(crate::io::open(path)?)?;
                if doc.variance.len() != len {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{len} variances"),
                        got: format!("{} in {}", doc.variance.len(), path.display()),
                    });
                }
                VarianceProfile::new(doc.variance)
            }
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileSpec::Step => f.write_str("paper"),
            ProfileSpec::Constant(v) => write!(f, "const:{v}"),
            ProfileSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for ProfileSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "paper" {
            return Ok(ProfileSpec::Step);
        }
        if let Some(v) = s.strip_prefix("const:") {
            let v: f64 = v
                .parse()
                .map_err(|_| Error::invalid(format!("bad constant variance '{v}'")))?;
            return Ok(ProfileSpec::Constant(v));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(ProfileSpec::File(PathBuf::from(p)));
        }
        Err(Error::invalid(format!(
            "profile '{s}' is not paper|const:<v>|file:<path>"
        )))
    }
}

/// Which PSD sets the subsampling bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthSource {
    #[default]
    Estimated,
    Theoretical,
}

impl FromStr for BandwidthSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "estimated" => Ok(BandwidthSource::Estimated),
            "theoretical" => Ok(BandwidthSource::Theoretical),
            other => Err(Error::invalid(format!(
                "bandwidth source '{other}' is not estimated|theoretical"
            ))),
        }
    }
}

fn as_string<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn from_string<'de, T, D>(d: D) -> std::result::Result<T, D::Error>
where
    T: FromStr<Err = Error>,
    D: Deserializer<'de>,
{
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// All parameters of an experiment run. Serialized as one JSON document;
/// missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "K")]
    pub len: usize,
    #[serde(rename = "P")]
    pub realizations: usize,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    #[serde(serialize_with = "as_string", deserialize_with = "from_string")]
    pub profile: ProfileSpec,
    #[serde(serialize_with = "as_string", deserialize_with = "from_string")]
    pub temporal: TemporalModel,
    pub windows: Vec<usize>,
    pub fraction: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub bandwidth_source: BandwidthSource,
    /// Samples synthesized and discarded before the record starts.
    pub warmup: usize,
    pub truncation_tol: f64,
    /// Cap on the decimation factor; `None` means `K/4`.
    pub max_decimation: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            len: 500,
            realizations: 2000,
            ar: vec![0.8, 0.1],
            ma: vec![1.0],
            profile: ProfileSpec::Step,
            temporal: TemporalModel::Iid,
            windows: vec![400, 425, 450, 475, 500],
            fraction: 0.9,
            seed: 1,
            out_dir: PathBuf::from("out"),
            bandwidth_source: BandwidthSource::Estimated,
            warmup: 0,
            truncation_tol: DEFAULT_TRUNCATION_TOL,
            max_decimation: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_reader(crate::io::open(path)?)?;
        Ok(cfg)
    }

    pub fn filter(&self) -> Result<LtiFilter> {
        make_filter(&self.ar, &self.ma, self.truncation_tol)
    }

    pub fn variance_profile(&self) -> Result<VarianceProfile> {
        self.profile.resolve(self.len)
    }

    pub fn decimation_cap(&self) -> usize {
        self.max_decimation.unwrap_or(self.len / 4).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.len == 0 || self.realizations == 0 {
            return Err(Error::invalid("K and P must be positive"));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "fraction {} not in (0, 1]",
                self.fraction
            )));
        }
        self.filter()?;
        self.variance_profile()?;
        Ok(())
    }
}
