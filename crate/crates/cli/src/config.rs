//! TOML run configuration and its resolution into solver inputs.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;
use slipstab::{
    nondimensionalize, rational_fixture, ElasticPair, InplaneModel, InplaneTransferSpec, NondimSet,
    RateStateFriction, SearchOptions, StoneleyPoleData, TabulatedTransfer, TransferModel, Window,
};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub elastic: Option<ElasticSection>,
    pub friction: Option<FrictionSection>,
    pub nondim: Option<NondimSection>,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub solver: SolverSection,
    pub inplane: Option<InplaneSection>,
    pub verify: Option<VerifySection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElasticSection {
    pub mu_layer: f64,
    pub rho_layer: f64,
    pub mu_sub: f64,
    pub rho_sub: f64,
    /// Layer thickness in m; `inf` for two half-spaces.
    pub h: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrictionSection {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub sigma_o: f64,
    pub v_o: f64,
    pub f: Option<f64>,
    pub alpha_ns: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NondimSection {
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    pub eps: Option<f64>,
    pub beta: Option<f64>,
    pub m: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    #[default]
    Layer,
    Halfspaces,
    Quasistatic,
    Inplane,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Geometric,
    Linear,
}

/// A scalar, an explicit list, or `{ start, stop, count, spacing }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Scalar(f64),
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

impl Grid {
    pub fn values(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Grid::Scalar(x) => vec![*x],
            Grid::List(v) => v.clone(),
            Grid::Range {
                start,
                stop,
                count,
                spacing,
            } => {
                let n = *count;
                if n == 0 {
                    return Err(CliError::Config(format!("{key}: count must be at least 1")));
                }
                if n == 1 {
                    vec![*start]
                } else {
                    match spacing {
                        Spacing::Linear => (0..n)
                            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                            .collect(),
                        Spacing::Geometric => {
                            if !(*start > 0.0 && *stop > 0.0) {
                                return Err(CliError::Config(format!(
                                    "{key}: geometric grid needs positive endpoints"
                                )));
                            }
                            let (l0, l1) = (start.ln(), stop.ln());
                            (0..n)
                                .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
                                .collect()
                        }
                    }
                }
            }
        };
        if v.is_empty() {
            return Err(CliError::Config(format!("{key}: grid is empty")));
        }
        if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::Config(format!(
                "{key}: values must be finite and positive"
            )));
        }
        let increasing = v.windows(2).all(|w| w[1] > w[0]);
        let decreasing = v.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(CliError::Config(format!(
                "{key}: grid must be strictly monotone"
            )));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub model: ModelName,
    #[serde(rename = "K")]
    pub k: Option<Grid>,
    pub eps: Option<Grid>,
    /// Dimensional wavenumber |k| in 1/m.
    pub wavenumber: Option<Grid>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub max_depth: Option<usize>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
    pub dedup: Option<f64>,
    pub quasi_static_threshold: Option<f64>,
    /// `[re_min, re_max, im_min, im_max]`; replaces the default windows.
    pub window: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSection {
    pub c_st: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InplaneSection {
    /// Built-in fixture name; only `"rational"` exists.
    pub fixture: Option<String>,
    /// CSV with columns `re,im,y11_re,y11_im,y21_re,y21_im`.
    pub file: Option<PathBuf>,
    pub pole: Option<PoleSection>,
    pub cut_from: Option<f64>,
    pub f: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Short,
    Long,
    Halfspaces,
    InplaneShort,
    InplaneLong,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub regime: Regime,
    /// Ladder of K values, zipped with `eps`; a single value is broadcast.
    #[serde(rename = "K")]
    pub k: Option<Grid>,
    pub eps: Option<Grid>,
    /// Overrides every per-formula tolerance.
    pub tolerance: Option<f64>,
    pub min_order: Option<f64>,
}

pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<Config, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Everything a command needs, with defaults and cross-checks applied.
#[derive(Clone)]
pub struct Setup {
    /// Fixed groups; `k` and `eps` are placeholders until a grid point sets them.
    pub base: NondimSet,
    pub dimensional: Option<(ElasticPair, RateStateFriction)>,
    pub model: TransferModel,
    pub model_name: ModelName,
    pub k_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub options: SearchOptions,
    pub window: Option<Window>,
    pub inplane_friction: (f64, f64),
}

impl Setup {
    /// Dimensional wavenumber behind a nondimensional `K`, when known.
    pub fn wavenumber(&self, k: f64) -> Option<f64> {
        self.dimensional
            .map(|(ep, fr)| k * 2.0 * fr.a * fr.sigma_o / (ep.mu_layer * fr.l))
    }

    pub fn point(&self, k: f64, eps: f64) -> NondimSet {
        self.base.with_k(k).with_eps(eps)
    }
}

fn derived(cfg: &Config) -> Result<Option<(ElasticPair, RateStateFriction, NondimSet)>, CliError> {
    match (&cfg.elastic, &cfg.friction) {
        (Some(e), Some(f)) => {
            let ep = ElasticPair::new(e.mu_layer, e.rho_layer, e.mu_sub, e.rho_sub, e.h)
                .map_err(|x| CliError::Config(format!("[elastic]: {x}")))?;
            let fr = RateStateFriction::new(f.a, f.b, f.l, f.sigma_o, f.v_o)
                .map_err(|x| CliError::Config(format!("[friction]: {x}")))?
                .with_normal_stress_coupling(f.f.unwrap_or(0.6), f.alpha_ns.unwrap_or(0.0));
            let nd =
                nondimensionalize(&ep, &fr, 1.0).map_err(|x| CliError::Config(x.to_string()))?;
            Ok(Some((ep, fr, nd)))
        }
        (None, None) => Ok(None),
        (Some(_), None) => Err(CliError::Config(
            "[elastic] given without [friction]".into(),
        )),
        (None, Some(_)) => Err(CliError::Config(
            "[friction] given without [elastic]".into(),
        )),
    }
}

/// Value from `[nondim]`, else from the dimensional input; warns when both
/// exist and disagree.
fn pick(key: &str, given: Option<f64>, implied: Option<f64>) -> Result<Option<f64>, CliError> {
    if let (Some(g), Some(d)) = (given, implied) {
        let both_inf = g.is_infinite() && d.is_infinite() && g.signum() == d.signum();
        if !both_inf && (g - d).abs() > 1e-9 * g.abs().max(d.abs()) {
            log::warn!("[nondim].{key} = {g} differs from {d} implied by [elastic]/[friction]; using [nondim]");
        }
    }
    Ok(given.or(implied))
}

fn required(key: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| {
        CliError::Config(format!(
            "{key} is not set: give [nondim].{key} or [elastic] and [friction]"
        ))
    })
}

fn inplane_spec(sec: &InplaneSection, base_dir: &Path) -> Result<InplaneTransferSpec, CliError> {
    let bad = |x: slipstab::Error| CliError::Config(format!("[inplane]: {x}"));
    let mut spec = match (&sec.fixture, &sec.file) {
        (Some(name), None) => {
            if name != "rational" {
                return Err(CliError::Config(format!(
                    "[inplane].fixture: unknown fixture {name:?}"
                )));
            }
            let p = sec.pole.as_ref().ok_or_else(|| {
                CliError::Config("[inplane].pole is required for the rational fixture".into())
            })?;
            rational_fixture(p.c_st, p.a, p.b).map_err(bad)?
        }
        (None, Some(file)) => {
            let path = if file.is_absolute() {
                file.clone()
            } else {
                base_dir.join(file)
            };
            let table = read_table(&path)?;
            let mut spec = table.into_spec(path.display().to_string()).map_err(bad)?;
            if let Some(p) = &sec.pole {
                spec = spec.with_pole(StoneleyPoleData::new(p.c_st, p.a, p.b).map_err(bad)?);
            }
            spec
        }
        _ => {
            return Err(CliError::Config(
                "[inplane]: give exactly one of fixture or file".into(),
            ))
        }
    };
    if let Some(b) = sec.cut_from {
        spec = spec.with_cut_from(b).map_err(bad)?;
    }
    Ok(spec)
}

fn read_table(path: &Path) -> Result<TabulatedTransfer, CliError> {
    let err = |x: String| CliError::Config(format!("{}: {x}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let expected = ["re", "im", "y11_re", "y11_im", "y21_re", "y21_im"];
    let header = rdr.headers().map_err(|e| err(e.to_string()))?.clone();
    if header.iter().map(str::trim).ne(expected) {
        return Err(err(format!("header must be {}", expected.join(","))));
    }
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let mut v = [0.0; 6];
        for (j, field) in rec.iter().enumerate().take(6) {
            v[j] = field.trim().parse().map_err(|_| {
                err(format!(
                    "line {}: cannot parse {field:?} as a number",
                    i + 2
                ))
            })?;
        }
        samples.push((
            Complex64::new(v[0], v[1]),
            Complex64::new(v[2], v[3]),
            Complex64::new(v[4], v[5]),
        ));
    }
    TabulatedTransfer::from_samples(&samples).map_err(|e| err(e.to_string()))
}

/// Resolve the configuration; `base_dir` anchors relative file paths.
pub fn resolve(cfg: &Config, base_dir: &Path) -> Result<Setup, CliError> {
    let dim = derived(cfg)?;
    let implied = dim.map(|d| d.2);
    let nd = cfg.nondim.clone().unwrap_or_default();
    let h = required("H", pick("H", nd.h, implied.map(|x| x.h))?)?;
    let eps = pick("eps", nd.eps, implied.map(|x| x.eps))?;
    let beta = required("beta", pick("beta", nd.beta, implied.map(|x| x.beta))?)?;
    let m = required("m", pick("m", nd.m, implied.map(|x| x.m))?)?;
    let r = required("r", pick("r", nd.r, implied.map(|x| x.r))?)?;

    let sweep = &cfg.sweep;
    let k_grid = match (&sweep.k, &sweep.wavenumber) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "[sweep]: give K or wavenumber, not both".into(),
            ))
        }
        (Some(g), None) => g.values("[sweep].K")?,
        (None, Some(g)) => {
            let Some((ep, fr, _)) = dim else {
                return Err(CliError::Config(
                    "[sweep].wavenumber needs [elastic] and [friction]".into(),
                ));
            };
            g.values("[sweep].wavenumber")?
                .into_iter()
                .map(|k| ep.mu_layer * k * fr.l / (2.0 * fr.a * fr.sigma_o))
                .collect()
        }
        (None, None) => match nd.k {
            Some(k) => Grid::Scalar(k).values("[nondim].K")?,
            None => Vec::new(),
        },
    };
    let eps_grid = match &sweep.eps {
        Some(g) => g.values("[sweep].eps")?,
        None => match eps {
            Some(e) => Grid::Scalar(e).values("eps")?,
            None => Vec::new(),
        },
    };

    let h = if sweep.model == ModelName::Halfspaces {
        f64::INFINITY
    } else {
        h
    };
    let base = NondimSet::new(1.0, h, 1.0, beta, m, r)
        .map_err(|e| CliError::Config(format!("[nondim]: {e}")))?;

    let (f_default, alpha_default) = dim.map(|d| (d.1.f, d.1.alpha_ns)).unwrap_or((0.6, 0.0));
    let inplane_friction = match &cfg.inplane {
        Some(sec) => (
            sec.f.unwrap_or(f_default),
            sec.alpha.unwrap_or(alpha_default),
        ),
        None => (f_default, alpha_default),
    };
    let model = match sweep.model {
        ModelName::Layer => TransferModel::LayerOnHalfspaceAntiplane,
        ModelName::Halfspaces => TransferModel::HalfspacesAntiplane,
        ModelName::Quasistatic => TransferModel::QuasistaticLayer,
        ModelName::Inplane => {
            let sec = cfg.inplane.as_ref().ok_or_else(|| {
                CliError::Config("model = \"inplane\" needs an [inplane] section".into())
            })?;
            let spec = inplane_spec(sec, base_dir)?;
            let (f, alpha) = inplane_friction;
            let model = InplaneModel::new(spec, f, alpha)
                .map_err(|e| CliError::Config(format!("[inplane]: {e}")))?;
            TransferModel::UserSupplied(Arc::new(model))
        }
    };

    let s = &cfg.solver;
    let d = SearchOptions::default();
    let options = SearchOptions {
        max_depth: s.max_depth.unwrap_or(d.max_depth),
        grid: s.grid.unwrap_or(d.grid),
        tolerance: s.tolerance.unwrap_or(d.tolerance),
        dedup: s.dedup.unwrap_or(d.dedup),
        quasi_static_threshold: s.quasi_static_threshold.unwrap_or(d.quasi_static_threshold),
    };
    if !(options.tolerance > 0.0
        && options.dedup > 0.0
        && options.quasi_static_threshold > 0.0
        && options.grid > 0)
    {
        return Err(CliError::Config(
            "[solver]: tolerance, dedup, quasi_static_threshold and grid must be positive".into(),
        ));
    }
    let window = match s.window {
        Some([a, b, c, d]) => Some(
            Window::new(a, b, c, d)
                .map_err(|e| CliError::Config(format!("[solver].window: {e}")))?,
        ),
        None => None,
    };

    Ok(Setup {
        base,
        dimensional: dim.map(|d| (d.0, d.1)),
        model,
        model_name: sweep.model,
        k_grid,
        eps_grid,
        options,
        window,
        inplane_friction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = Grid::Range {
            start: 1e-4,
            stop: 1.0,
            count: 5,
            spacing: Spacing::Geometric,
        };
        let v = g.values("K").unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[1] - 1e-3).abs() < 1e-15);
        assert!(Grid::List(vec![1.0, 1.0]).values("K").is_err());
        assert!(Grid::List(vec![]).values("K").is_err());
        assert!(Grid::Scalar(-1.0).values("K").is_err());
        assert_eq!(
            Grid::List(vec![3.0, 2.0]).values("K").unwrap(),
            vec![3.0, 2.0]
        );
    }

    #[test]
    fn nondimensional_config() {
        let cfg = parse(
            r#"
            [nondim]
            H = 1.0
            beta = 1.0
            m = 1.5
            r = 1.5
            [sweep]
            K = { start = 1e-4, stop = 1e-2, count = 3 }
            eps = [1e-2]
            "#,
        )
        .unwrap();
        let s = resolve(&cfg, Path::new(".")).unwrap();
        assert_eq!(s.k_grid.len(), 3);
        assert_eq!(s.eps_grid, vec![1e-2]);
        assert!(s.wavenumber(1.0).is_none());
    }

    #[test]
    fn dimensional_config_maps_onto_groups() {
        let cfg = parse(
            r#"
            [elastic]
            mu_layer = 30e9
            rho_layer = 3000.0
            mu_sub = 45e9
            rho_sub = 2000.0
            h = 100.0
            [friction]
            a = 0.01
            b = 0.015
            L = 1e-2
            sigma_o = 1e8
            v_o = 1e-9
            [sweep]
            wavenumber = [1e-2]
            "#,
        )
        .unwrap();
        let s = resolve(&cfg, Path::new(".")).unwrap();
        assert!((s.k_grid[0] - 1.5).abs() < 1e-12);
        assert!((s.wavenumber(s.k_grid[0]).unwrap() - 1e-2).abs() < 1e-15);
        assert!((s.base.beta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn config_errors_name_the_key() {
        let e = parse("[nondim]\nbeta = 1.0\nmm = 2.0\n").err().unwrap();
        assert!(e.to_string().contains("mm"), "{e}");
        assert!(e.to_string().contains("line 3"), "{e}");
        let cfg = parse("[nondim]\nbeta = 1.0\nm = 1.5\nr = 1.5\n").unwrap();
        let e = resolve(&cfg, Path::new(".")).err().unwrap();
        assert!(e.to_string().contains("H"), "{e}");
        let cfg = parse(
            "[nondim]\nH = 1.0\nbeta = 1.0\nm = 1.5\nr = 1.5\n[sweep]\nK = [1.0, 0.5, 2.0]\n",
        )
        .unwrap();
        let e = resolve(&cfg, Path::new(".")).err().unwrap();
        assert!(e.to_string().contains("[sweep].K"), "{e}");
    }

    #[test]
    fn rational_fixture_from_config() {
        let cfg = parse(
            r#"
            [nondim]
            H = 1.0
            beta = 1.0
            m = 1.5
            r = 1.5
            [sweep]
            model = "inplane"
            [inplane]
            fixture = "rational"
            pole = { c_st = 0.9, A = 1.0, B = 0.3 }
            f = 0.6
            alpha = 0.6
            "#,
        )
        .unwrap();
        let s = resolve(&cfg, Path::new(".")).unwrap();
        assert!(s.model.is_inplane());
        assert_eq!(s.inplane_friction, (0.6, 0.6));
    }
}
