//! Flat run configuration shared by the command line and JSON config files.
//! Flags override file values; `--echo-config` prints the merged document
//! with defaults filled in.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kernel,
    Symmetric,
    Spectrum,
    Dynamics,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// Numbers or strings; grids are kept as text until resolution.
fn text<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Scalar {
        Int(i64),
        Real(f64),
        Text(String),
    }
    Ok(Option::<Scalar>::deserialize(d)?.map(|s| match s {
        Scalar::Int(i) => i.to_string(),
        Scalar::Real(r) => r.to_string(),
        Scalar::Text(t) => t,
    }))
}

macro_rules! run_config {
    ($( $(#[$meta:meta])* $field:ident : $ty:ty ),* $(,)?) => {
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields, rename_all = "kebab-case")]
        pub struct RunConfig {
            $( $(#[$meta])* #[serde(default, skip_serializing_if = "Option::is_none")] pub $field: Option<$ty>, )*
        }

        impl RunConfig {
            /// Fields set in `other` replace those in `self`.
            pub fn overlay(&mut self, other: RunConfig) {
                $( if other.$field.is_some() { self.$field = other.$field; } )*
            }

            fn fill(&mut self, defaults: RunConfig) {
                $( if self.$field.is_none() { self.$field = defaults.$field; } )*
            }
        }
    };
}

run_config! {
    command: Command,
    #[serde(deserialize_with = "text")] nx: String,
    #[serde(deserialize_with = "text")] nz: String,
    #[serde(deserialize_with = "text")] xi: String,
    kind: String,
    /// Lattice: `x`, `z`, `transverse` or an angle in degrees. Kernel: a
    /// comma list of `parallel`, `perpendicular` or `c²` values.
    pol: String,
    /// Drive direction: `x`, `z` or an angle in degrees from x̂ toward ẑ.
    klong: String,
    order: String,
    #[serde(deserialize_with = "text")] m: String,
    t_min: f64,
    t_max: f64,
    points: usize,
    time_grid: String,
    xi_max: f64,
    steps: usize,
    #[serde(deserialize_with = "text")] a: String,
    #[serde(deserialize_with = "text")] b: String,
    horizon: f64,
    /// Phase indices whose mode weights are added to a spectrum.
    #[serde(deserialize_with = "text")] weights: String,
    condition_limit: f64,
    dynamics_cap: usize,
    output: String,
    format: Format,
    jobs: usize,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&raw).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fill every unset field the command reads. `jobs` and `output` are
    /// left alone so an echoed config does not pin the machine.
    pub fn with_defaults(mut self) -> Self {
        let lattice = |nx: &str, nz: &str, xi: &str| RunConfig {
            nx: Some(nx.into()),
            nz: Some(nz.into()),
            xi: Some(xi.into()),
            kind: Some("2d".into()),
            pol: Some("transverse".into()),
            klong: Some("z".into()),
            order: Some("z-major".into()),
            format: Some(Format::Csv),
            ..RunConfig::default()
        };
        let defaults = match self.command {
            Some(Command::Kernel) => RunConfig {
                kind: Some("2d".into()),
                pol: Some("parallel,perpendicular".into()),
                xi_max: Some(18.85),
                steps: Some(600),
                format: Some(Format::Csv),
                ..RunConfig::default()
            },
            Some(Command::Symmetric) => lattice("10", "10", "1"),
            Some(Command::Spectrum) => RunConfig {
                condition_limit: Some(rddi_core::collective::DEFAULT_CONDITION_LIMIT),
                ..lattice("10", "10", "1")
            },
            Some(Command::Dynamics) => RunConfig {
                m: Some("0".into()),
                t_min: Some(1e-2),
                t_max: Some(1e3),
                points: Some(rddi_core::collective::DEFAULT_TIME_POINTS),
                time_grid: Some("log".into()),
                condition_limit: Some(rddi_core::collective::DEFAULT_CONDITION_LIMIT),
                ..lattice("10", "10", "1")
            },
            Some(Command::Oracle) => RunConfig {
                a: Some("0,0.5,1,3,-3,7.5,20".into()),
                b: Some("0.5,1,2,5,10".into()),
                m: Some("3".into()),
                horizon: Some(20.0),
                dynamics_cap: Some(rddi_core::oracles::DEFAULT_DYNAMICS_CAP),
                format: Some(Format::Table),
                ..lattice("4", "4", "1")
            },
            None => RunConfig::default(),
        };
        self.fill(defaults);
        self
    }
}
