use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{MatchMode, SynthCorpusConfig};
use crate::dictionary::{FrequencyBand, DEFAULT_DOMINANCE_THRESHOLD};
use crate::error::{Error, Result};
use crate::events::{CalendarConfig, SpikeConfig};
use crate::memory::{AcfFitConfig, LongMemoryConfig, PsdFitConfig, WelchConfig, YearlyAcfConfig};
use crate::nulls::{ShuffleScheme, SynthSpec};
use crate::periodicity::CycleConfig;

/// Everything a run depends on. Loaded from TOML; every section and key is
/// optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Output directory; the `--out` flag and the environment take
    /// precedence in that order.
    pub out: Option<PathBuf>,
    pub input: InputConfig,
    pub extract: ExtractConfig,
    pub cycles: CycleConfig,
    pub spikes: SpikeConfig,
    pub calendar: CalendarConfig,
    pub acf: YearlyAcfConfig,
    pub welch: WelchConfig,
    pub fit: FitConfig,
    pub shuffle: ShuffleConfig,
    pub pca: PcaConfig,
    pub synth_series: Option<SynthSpec>,
    pub synth_corpus: Option<SynthCorpusConfig>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: None,
            input: InputConfig::default(),
            extract: ExtractConfig::default(),
            cycles: CycleConfig::default(),
            spikes: SpikeConfig::default(),
            calendar: CalendarConfig::default(),
            acf: YearlyAcfConfig::default(),
            welch: WelchConfig::default(),
            fit: FitConfig::default(),
            shuffle: ShuffleConfig::default(),
            pca: PcaConfig::default(),
            synth_series: None,
            synth_corpus: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    /// JSON Lines documents with `date` and `text`.
    pub corpus: Option<PathBuf>,
    /// Per-term daily counts written by `extract` or `synth-corpus`.
    pub counts: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    /// A single daily series for the series-level stages.
    pub series: Option<PathBuf>,
    /// Value column of `series`.
    pub column: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractConfig {
    pub match_mode: MatchMode,
    /// Drop terms whose document frequency falls outside this band.
    pub frequency_band: Option<FrequencyBand>,
    pub dominance_threshold: f64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            match_mode: MatchMode::Substring,
            frequency_band: None,
            dominance_threshold: DEFAULT_DOMINANCE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub acf: AcfFitConfig,
    pub psd: PsdFitConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShuffleConfig {
    pub schemes: Vec<ShuffleScheme>,
    pub repetitions: usize,
    pub max_lag: usize,
}

impl Default for ShuffleConfig {
    fn default() -> Self {
        Self {
            schemes: vec![ShuffleScheme::Daily, ShuffleScheme::Weekly, ShuffleScheme::Monthly],
            repetitions: 10,
            max_lag: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PcaConfig {
    /// Surrogate scheme for the trajectory-smoothness comparison.
    pub scheme: ShuffleScheme,
    pub repetitions: usize,
}

impl Default for PcaConfig {
    fn default() -> Self {
        Self {
            scheme: ShuffleScheme::Weekly,
            repetitions: 10,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Reads a TOML configuration, or the configuration embedded in a run
    /// manifest when the file is JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        if text.trim_start().starts_with('{') {
            let manifest: super::Manifest =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            return Ok(manifest.config);
        }
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn long_memory(&self) -> LongMemoryConfig {
        LongMemoryConfig {
            acf: self.acf,
            welch: self.welch,
            acf_fit: self.fit.acf,
            psd_fit: self.fit.psd,
        }
    }

    /// Checks thresholds and that every referenced input exists.
    pub fn validate(&self) -> Result<()> {
        for path in [&self.input.corpus, &self.input.counts, &self.input.dictionary, &self.input.series]
            .into_iter()
            .flatten()
        {
            require_file(path)?;
        }
        let c = &self.calendar;
        if !(c.low < c.high && c.std_max > 0.0) {
            return Err(Error::Config(format!(
                "calendar thresholds need low < high and std_max > 0, got {}/{}/{}",
                c.low, c.high, c.std_max
            )));
        }
        if !(self.spikes.threshold > 0.0 && self.spikes.baseline_return > 0.0) {
            return Err(Error::Config("spike thresholds must be positive".into()));
        }
        if !(self.fit.acf.lo < self.fit.acf.hi && self.fit.psd.lo < self.fit.psd.hi) {
            return Err(Error::Config("fit ranges need lo < hi".into()));
        }
        if self.shuffle.repetitions == 0 || self.pca.repetitions == 0 {
            return Err(Error::Config("surrogate repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn require_file(path: &Path) -> Result<()> {
    std::fs::metadata(path).map(|_| ()).map_err(|source| Error::ReadPath {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::ReadPath {
        path: path.to_path_buf(),
        source,
    })
}
