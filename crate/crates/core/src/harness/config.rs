use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensembles::{CdfTable, Density, EnsembleKind, EnsembleSpec, EntryLaw};
use crate::error::{Error, Result};
use crate::polycore::ComplexScalar;
use crate::rootfind::MAX_EIGEN_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Pair,
    Clt,
    Conjecture,
    CstCheck,
    Selftest,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Pair => "pair",
            Experiment::Clt => "clt",
            Experiment::Conjecture => "conjecture",
            Experiment::CstCheck => "cst-check",
            Experiment::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityChoice {
    UniformDisk,
    StdComplexGaussian,
    /// Tabulated radial CDF read from `cdf_table`.
    Radial,
}

/// Flat experiment configuration. Layering: defaults, then a JSON file with
/// exactly these field names, then command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub ensemble: EnsembleKind,
    pub density: DensityChoice,
    pub cdf_table: Option<PathBuf>,
    pub entry_law: EntryLaw,
    pub n: usize,
    pub trials: usize,
    /// `[re, im]`.
    pub u0: [f64; 2],
    /// Certification radius `r_n = n^-alpha`.
    pub r_exponent: f64,
    #[serde(rename = "R_grid")]
    pub r_grid: Vec<f64>,
    pub exclusion_radius: f64,
    pub master_seed: u64,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    pub output_dir: PathBuf,
    /// CLT evaluation point `z_n = n^-clt_exponent`.
    pub clt_exponent: f64,
    /// Replaces `sqrt(n / log n)` by `n^e` in the chi statistic.
    pub chi_norm_exponent: Option<f64>,
    pub weyl_max_degree: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub contour_nodes: usize,
    pub mc_batches: usize,
    pub mc_batch_size: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Pair,
            ensemble: EnsembleKind::IidZeros,
            density: DensityChoice::UniformDisk,
            cdf_table: None,
            entry_law: EntryLaw::ComplexGaussian,
            n: 500,
            trials: 300,
            u0: [0.5, 0.0],
            r_exponent: 0.75,
            r_grid: vec![0.5, 1.0, 1.5],
            exclusion_radius: 0.1,
            master_seed: 1,
            threads: 0,
            output_dir: PathBuf::from("out"),
            clt_exponent: 0.6,
            chi_norm_exponent: None,
            weyl_max_degree: 200,
            tol: 1e-13,
            max_iter: 500,
            contour_nodes: crate::rootfind::DEFAULT_CONTOUR_NODES,
            mc_batches: 32,
            mc_batch_size: 100_000,
        }
    }
}

/// Command-line overrides; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub ensemble: Option<EnsembleKind>,
    pub density: Option<DensityChoice>,
    pub cdf_table: Option<PathBuf>,
    pub entry_law: Option<EntryLaw>,
    pub u0_re: Option<f64>,
    pub u0_im: Option<f64>,
    pub alpha: Option<f64>,
    pub r_grid: Option<Vec<f64>>,
    pub exclusion_radius: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub clt_exponent: Option<f64>,
    pub chi_norm_exponent: Option<f64>,
    pub weyl_max_degree: Option<usize>,
}

impl ExperimentConfig {
    pub fn for_experiment(experiment: Experiment) -> Self {
        Self {
            experiment,
            ..Self::default()
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_json_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// Defaults, then the optional JSON file, then `overrides`; the
    /// subcommand always wins over an `experiment` field in the file.
    pub fn load(experiment: Experiment, file: Option<&Path>, overrides: &ConfigOverrides) -> Result<Self> {
        let mut cfg = match file {
            Some(path) => Self::from_json_path(path)?,
            None => Self::default(),
        };
        cfg.experiment = experiment;
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &ConfigOverrides) {
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value.clone() {
                    self.$field = v;
                }
            };
        }
        set!(n, o.n);
        set!(trials, o.trials);
        set!(master_seed, o.seed);
        set!(ensemble, o.ensemble);
        set!(density, o.density);
        set!(entry_law, o.entry_law);
        set!(r_exponent, o.alpha);
        set!(r_grid, o.r_grid);
        set!(exclusion_radius, o.exclusion_radius);
        set!(output_dir, o.out);
        set!(threads, o.threads);
        set!(clt_exponent, o.clt_exponent);
        set!(weyl_max_degree, o.weyl_max_degree);
        if let Some(re) = o.u0_re {
            self.u0[0] = re;
        }
        if let Some(im) = o.u0_im {
            self.u0[1] = im;
        }
        if o.cdf_table.is_some() {
            self.cdf_table = o.cdf_table.clone();
        }
        if o.chi_norm_exponent.is_some() {
            self.chi_norm_exponent = o.chi_norm_exponent;
        }
    }

    pub fn u0(&self) -> ComplexScalar {
        ComplexScalar::new(self.u0[0], self.u0[1])
    }

    /// Certification radius `n^-alpha`.
    pub fn r_n(&self) -> f64 {
        (self.n as f64).powf(-self.r_exponent)
    }

    /// CLT evaluation point `n^-clt_exponent`.
    pub fn z_n(&self) -> ComplexScalar {
        ComplexScalar::new((self.n as f64).powf(-self.clt_exponent), 0.0)
    }

    pub fn density(&self) -> Result<Density> {
        match self.density {
            DensityChoice::UniformDisk => Ok(Density::UniformDisk),
            DensityChoice::StdComplexGaussian => Ok(Density::StdComplexGaussian),
            DensityChoice::Radial => {
                let path = self
                    .cdf_table
                    .as_deref()
                    .ok_or_else(|| Error::Config("density \"radial\" needs cdf_table".into()))?;
                Ok(Density::Radial(CdfTable::from_csv_path(path)?))
            }
        }
    }

    pub fn ensemble_spec(&self) -> Result<EnsembleSpec> {
        let mut spec = EnsembleSpec::new(self.ensemble, self.n, self.master_seed).with_density(self.density()?);
        spec.entry_law = self.entry_law;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.r_exponent > 0.5 && self.r_exponent < 1.0) {
            return bad(format!("r_exponent = {} must lie in (1/2, 1)", self.r_exponent));
        }
        if !(self.clt_exponent > 0.5 && self.clt_exponent.is_finite()) {
            return bad(format!("clt_exponent = {} must exceed 1/2", self.clt_exponent));
        }
        if !self.u0.iter().all(|x| x.is_finite()) {
            return bad("u0 must be finite".into());
        }
        if self.r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return bad("R_grid entries must be positive and finite".into());
        }
        if !(self.exclusion_radius >= 0.0) {
            return bad("exclusion_radius must be nonnegative".into());
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return bad("tol must be positive and max_iter nonzero".into());
        }
        if self.contour_nodes < 8 {
            return bad("contour_nodes must be at least 8".into());
        }
        if self.density == DensityChoice::Radial && self.cdf_table.is_none() {
            return bad("density \"radial\" needs cdf_table".into());
        }
        match self.experiment {
            Experiment::Pair | Experiment::Clt => {
                if self.n < 3 {
                    return bad(format!("n = {} but {} needs n >= 3", self.n, self.experiment.as_str()));
                }
                if self.ensemble != EnsembleKind::IidZeros {
                    return bad(format!("{} runs on the iid-zeros ensemble only", self.experiment.as_str()));
                }
            }
            Experiment::Conjecture => {
                if self.n < 3 {
                    return bad(format!("n = {} but conjecture needs n >= 3", self.n));
                }
                if self.ensemble == EnsembleKind::Weyl && self.n > self.weyl_max_degree {
                    return bad(format!("Weyl degree {} exceeds weyl_max_degree {}", self.n, self.weyl_max_degree));
                }
                if self.ensemble == EnsembleKind::GinibreCharPoly && self.n > MAX_EIGEN_DIM {
                    return bad(format!("Ginibre dimension {} exceeds {MAX_EIGEN_DIM}", self.n));
                }
            }
            Experiment::CstCheck => {
                if self.mc_batches < 8 || self.mc_batch_size < 100 {
                    return bad("median of means needs mc_batches >= 8 and mc_batch_size >= 100".into());
                }
            }
            Experiment::Selftest => {}
        }
        Ok(())
    }
}
