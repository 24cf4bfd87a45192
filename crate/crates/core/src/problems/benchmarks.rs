//! The built-in benchmark problems and the problem registry.
//!
//! Lipschitz constants are not published for any of these problems. They are
//! estimated once per (problem, parameters) by sampling with a 1.5 safety
//! factor and cached for the life of the process.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use super::{LipschitzRegion, ProblemDefinition};
use crate::error::{Error, Result};

/// Static facts about a registered problem, used for listings and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkInfo {
    pub name: &'static str,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// Default `(tol_eps, tol_delta)` pair.
    pub default_tolerances: (f64, f64),
    pub default_params: &'static [(&'static str, f64)],
    pub summary: &'static str,
}

const BENCHMARKS: &[BenchmarkInfo] = &[
    BenchmarkInfo {
        name: "MOP",
        n: 2,
        m: 2,
        p: 0,
        default_tolerances: (0.001, 0.0001),
        default_params: &[],
        summary: "two-objective test problem with a disconnected front and two knees",
    },
    BenchmarkInfo {
        name: "DEB2DK",
        n: 3,
        m: 2,
        p: 0,
        default_tolerances: (0.0015, 0.00015),
        default_params: &[("K", 4.0), ("n", 3.0)],
        summary: "two-objective knee problem, K controls the number of knees",
    },
    BenchmarkInfo {
        name: "DEB3DK",
        n: 3,
        m: 3,
        p: 0,
        default_tolerances: (0.006, 0.008),
        default_params: &[("K", 1.0), ("n", 3.0)],
        summary: "three-objective knee problem",
    },
    BenchmarkInfo {
        name: "welded-beam",
        n: 4,
        m: 2,
        p: 4,
        default_tolerances: (0.3, 0.02),
        default_params: &[],
        summary: "welded beam design: fabrication cost vs end deflection",
    },
    BenchmarkInfo {
        name: "water-resources",
        n: 3,
        m: 5,
        p: 7,
        default_tolerances: (0.1, 0.02),
        default_params: &[],
        summary: "storm drainage planning with five cost objectives",
    },
];

pub fn benchmark_names() -> Vec<&'static str> {
    BENCHMARKS.iter().map(|b| b.name).collect()
}

/// Built-in problems followed by user-registered ones (name only).
pub fn list_problems() -> Vec<(String, Option<BenchmarkInfo>)> {
    let mut out: Vec<(String, Option<BenchmarkInfo>)> = BENCHMARKS
        .iter()
        .map(|b| (b.name.to_string(), Some(b.clone())))
        .collect();
    let user = user_registry().lock().expect("registry poisoned");
    let mut names: Vec<&String> = user.keys().collect();
    names.sort();
    out.extend(names.into_iter().map(|n| (n.clone(), None)));
    out
}

fn canonical_name(name: &str) -> Option<&'static BenchmarkInfo> {
    let key = name.to_ascii_lowercase().replace('_', "-");
    BENCHMARKS.iter().find(|b| {
        b.name.to_ascii_lowercase() == key
            || (b.name == "welded-beam" && key == "weldedbeam")
            || (b.name == "water-resources" && (key == "water" || key == "waterresources"))
    })
}

impl BenchmarkInfo {
    pub fn lookup(name: &str) -> Option<&'static BenchmarkInfo> {
        canonical_name(name)
    }
}

fn user_registry() -> &'static Mutex<HashMap<String, ProblemDefinition>> {
    static USER: OnceLock<Mutex<HashMap<String, ProblemDefinition>>> = OnceLock::new();
    USER.get_or_init(Default::default)
}

type LipschitzCache = HashMap<String, (Vec<f64>, Option<Vec<f64>>)>;

fn lipschitz_cache() -> &'static Mutex<LipschitzCache> {
    static CACHE: OnceLock<Mutex<LipschitzCache>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Makes a user-defined problem available to [`get_problem`] under its name.
/// Built-in names cannot be shadowed.
pub fn register_problem(problem: ProblemDefinition) -> Result<()> {
    if canonical_name(problem.name()).is_some() {
        return Err(Error::InvalidParameter {
            problem: problem.name().to_string(),
            reason: "name collides with a built-in problem".into(),
        });
    }
    user_registry()
        .lock()
        .expect("registry poisoned")
        .insert(problem.name().to_string(), problem);
    Ok(())
}

/// Looks up a built-in or registered problem. Benchmarks DEB2DK and DEB3DK
/// accept integer parameters `K >= 1` and `n >= 2`.
pub fn get_problem(name: &str, params: &BTreeMap<String, f64>) -> Result<ProblemDefinition> {
    let Some(info) = canonical_name(name) else {
        return user_registry()
            .lock()
            .expect("registry poisoned")
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownProblem(name.to_string()));
    };

    let mut resolved: BTreeMap<String, f64> = info
        .default_params
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (k, v) in params {
        if !resolved.contains_key(k) {
            return Err(Error::InvalidParameter {
                problem: info.name.into(),
                reason: format!("unknown parameter `{k}`"),
            });
        }
        resolved.insert(k.clone(), *v);
    }

    let key = format!("{}{:?}", info.name, resolved);
    let cached = lipschitz_cache()
        .lock()
        .expect("cache poisoned")
        .get(&key)
        .cloned();

    let builder = match info.name {
        "MOP" => mop(),
        "DEB2DK" => {
            let (k, n) = knee_params(info.name, &resolved)?;
            deb2dk(k, n)
        }
        "DEB3DK" => {
            let (k, n) = knee_params(info.name, &resolved)?;
            deb3dk(k, n)
        }
        "welded-beam" => welded_beam(),
        "water-resources" => water_resources(),
        _ => unreachable!("benchmark table and constructors out of sync"),
    };
    let builder = resolved
        .iter()
        .fold(builder, |b, (k, v)| b.param(k.clone(), *v));

    let problem = match cached {
        Some((lf, lg)) => {
            let b = builder.lipschitz(lf);
            match lg {
                Some(lg) => b.constraint_lipschitz(lg),
                None => b,
            }
            .build()?
        }
        None => {
            let problem = builder.build()?;
            lipschitz_cache().lock().expect("cache poisoned").insert(
                key,
                (
                    problem.lipschitz_f().to_vec(),
                    problem.lipschitz_g().map(<[f64]>::to_vec),
                ),
            );
            problem
        }
    };
    Ok(problem)
}

fn knee_params(name: &str, params: &BTreeMap<String, f64>) -> Result<(u32, usize)> {
    let k = params["K"];
    let n = params["n"];
    let invalid = |reason: String| Error::InvalidParameter {
        problem: name.to_string(),
        reason,
    };
    if k.fract() != 0.0 || k < 1.0 {
        return Err(invalid(format!("K must be an integer >= 1, got {k}")));
    }
    if n.fract() != 0.0 || n < 2.0 || n > 64.0 {
        return Err(invalid(format!("n must be an integer in [2, 64], got {n}")));
    }
    Ok((k as u32, n as usize))
}

fn mop() -> super::ProblemBuilder {
    ProblemDefinition::builder("MOP", vec![-3.0; 2], vec![3.0; 2]).objectives(2, |x, f| {
        let s = x[0] + x[1];
        let d = x[0] - x[1];
        let base = (1.0 + s * s).sqrt() + (1.0 + d * d).sqrt();
        let bump = (-d * d).exp();
        f[0] = 0.5 * (base + d) + bump;
        f[1] = 0.5 * (base - d) + bump;
    })
}

fn knee_radius(k: f64, t: f64) -> f64 {
    5.0 + 10.0 * (t - 0.5) * (t - 0.5) + (2.0 * k * PI * t).cos() / k
}

fn deb2dk(k: u32, n: usize) -> super::ProblemBuilder {
    let k = f64::from(k);
    ProblemDefinition::builder("DEB2DK", vec![0.0; n], vec![1.0; n]).objectives(2, move |x, f| {
        let g = 1.0 + 9.0 / (x.len() - 1) as f64 * x[1..].iter().sum::<f64>();
        let r = knee_radius(k, x[0]);
        let a = 0.5 * PI * x[0];
        f[0] = g * r * a.sin();
        f[1] = g * r * a.cos();
    })
}

fn deb3dk(k: u32, n: usize) -> super::ProblemBuilder {
    let k = f64::from(k);
    ProblemDefinition::builder("DEB3DK", vec![0.0; n], vec![1.0; n]).objectives(3, move |x, f| {
        let g = 1.0 + 9.0 / (x.len() - 1) as f64 * x[2..].iter().sum::<f64>();
        let r = (knee_radius(k, x[0]) + knee_radius(k, x[1])) / 2.0;
        let a = 0.5 * PI * x[0];
        let b = 0.5 * PI * x[1];
        f[0] = g * r * a.sin() * b.sin();
        f[1] = g * r * a.sin() * b.cos();
        f[2] = g * r * a.cos();
    })
}

/// Welded beam with x = (x1, x2, x3, x4) as printed: x1 weld thickness,
/// x2 bar thickness, x3 weld length, x4 bar height.
fn welded_beam() -> super::ProblemBuilder {
    ProblemDefinition::builder("welded-beam", vec![0.125, 0.125, 0.1, 0.1], vec![5.0, 5.0, 10.0, 10.0])
        .objectives(2, |x, f| {
            f[0] = 1.10471 * x[0] * x[0] * x[2] + 0.04811 * x[1] * x[3] * (14.0 + x[2]);
            f[1] = 2.1592 / (x[1] * x[3].powi(3));
        })
        .constraints(4, |x, g| {
            g[0] = 13600.0 - welded_beam_shear(x);
            g[1] = 30000.0 - 504000.0 / (x[1] * x[3] * x[3]);
            g[2] = x[1] - x[0];
            g[3] = 64746.022 * (1.0 - 0.0282346 * x[3]) * x[3] * x[1].powi(3) - 6000.0;
        })
        .constraint_enclosure(welded_beam_enclosure)
        .lipschitz_region(LipschitzRegion::Feasible)
        .estimate_constraint_lipschitz(true)
}

/// Upper bounds of the welded-beam constraints over a box. On the domain
/// sigma falls and P_c rises in x2 and x4 (P_c's x4 factor peaks near 17.7),
/// and every piece of tau is positive, so bounds come from the box corners.
fn welded_beam_enclosure(lo: &[f64], hi: &[f64], out: &mut [f64]) {
    let tau_min = {
        let tau_p = 6000.0 / (2f64.sqrt() * hi[0] * hi[2]);
        let r_lo = (0.25 * (lo[2] * lo[2] + (lo[0] + lo[3]) * (lo[0] + lo[3]))).sqrt();
        let r_hi = (0.25 * (hi[2] * hi[2] + (hi[0] + hi[3]) * (hi[0] + hi[3]))).sqrt();
        let tau_pp = 6000.0 * (14.0 + 0.5 * lo[2]) * r_lo
            / (1.414 * hi[0] * hi[2] * (hi[2] * hi[2] / 12.0 + 0.25 * (hi[0] + hi[3]) * (hi[0] + hi[3])));
        (tau_p * tau_p + tau_pp * tau_pp + lo[2] * tau_p * tau_pp / r_hi).sqrt()
    };
    out[0] = 13600.0 - tau_min;
    out[1] = 30000.0 - 504000.0 / (hi[1] * hi[3] * hi[3]);
    out[2] = hi[1] - lo[0];
    out[3] = 64746.022 * (1.0 - 0.0282346 * hi[3]) * hi[3] * hi[1].powi(3) - 6000.0;
}

fn welded_beam_shear(x: &[f64]) -> f64 {
    let (x1, x3, x4) = (x[0], x[2], x[3]);
    let tau_p = 6000.0 / (2f64.sqrt() * x1 * x3);
    let r = (0.25 * (x3 * x3 + (x1 + x4) * (x1 + x4))).sqrt();
    let tau_pp = 6000.0 * (14.0 + 0.5 * x3) * r
        / (1.414 * x1 * x3 * (x3 * x3 / 12.0 + 0.25 * (x1 + x4) * (x1 + x4)));
    (tau_p * tau_p + tau_pp * tau_pp + x3 * tau_p * tau_pp / r).sqrt()
}

/// Storm drainage planning. The printed third objective, the fourth
/// objective's constant and constraint g4's variable are garbled in print;
/// this is the widely used formulation of the same problem:
///
/// - f3 = 305700 * 2289 * x2 / (0.06 * 2289)^0.65
/// - f4 = 250 * 2289 * exp(-39.75 x2 + 9.9 x3 + 2.74)
/// - g4 uses `8046.33 * x3`
///
/// Constraints are stored as `limit - lhs >= 0`.
fn water_resources() -> super::ProblemBuilder {
    ProblemDefinition::builder("water-resources", vec![0.01, 0.01, 0.01], vec![0.45, 0.1, 0.1])
        .objectives(5, |x, f| {
            let (x1, x2, x3) = (x[0], x[1], x[2]);
            f[0] = 106780.37 * (x2 + x3) + 61704.67;
            f[1] = 3000.0 * x1;
            f[2] = 305700.0 * 2289.0 * x2 / (0.06f64 * 2289.0).powf(0.65);
            f[3] = 250.0 * 2289.0 * (-39.75 * x2 + 9.9 * x3 + 2.74).exp();
            f[4] = 25.0 * (1.39 / (x1 * x2) + 4940.0 * x3 - 80.0);
        })
        .constraints(7, |x, g| {
            let (x1, x2, x3) = (x[0], x[1], x[2]);
            let q = x1 * x2;
            g[0] = 1.0 - (0.00139 / q + 4.94 * x3 - 0.08);
            g[1] = 1.0 - (0.000306 / q + 1.082 * x3 - 0.0986);
            g[2] = 50000.0 - (12.307 / q + 49408.24 * x3 + 4051.02);
            g[3] = 16000.0 - (2.098 / q + 8046.33 * x3 - 696.71);
            g[4] = 10000.0 - (2.138 / q + 7883.39 * x3 - 705.04);
            g[5] = 2000.0 - (0.417 * q + 1721.26 * x3 - 136.54);
            g[6] = 550.0 - (0.164 / q + 631.13 * x3 - 54.48);
        })
        .constraint_enclosure(water_resources_enclosure)
        .lipschitz_region(LipschitzRegion::Feasible)
        .estimate_constraint_lipschitz(true)
}

/// Every water-resources constraint is `limit - (a / q + b * x3 + c)` with
/// positive `a`, `b` (or `a * q + b * x3 + c` for g6), `q = x1 * x2`.
fn water_resources_enclosure(lo: &[f64], hi: &[f64], out: &mut [f64]) {
    let (q_lo, q_hi) = (lo[0] * lo[1], hi[0] * hi[1]);
    let x3 = lo[2];
    out[0] = 1.0 - (0.00139 / q_hi + 4.94 * x3 - 0.08);
    out[1] = 1.0 - (0.000306 / q_hi + 1.082 * x3 - 0.0986);
    out[2] = 50000.0 - (12.307 / q_hi + 49408.24 * x3 + 4051.02);
    out[3] = 16000.0 - (2.098 / q_hi + 8046.33 * x3 - 696.71);
    out[4] = 10000.0 - (2.138 / q_hi + 7883.39 * x3 - 705.04);
    out[5] = 2000.0 - (0.417 * q_lo + 1721.26 * x3 - 136.54);
    out[6] = 550.0 - (0.164 / q_hi + 631.13 * x3 - 54.48);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SearchBox;
    use rand::{Rng, SeedableRng};

    fn get(name: &str) -> ProblemDefinition {
        get_problem(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn mop_at_origin() {
        let e = get("MOP").evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(e.objectives, vec![2.0, 2.0]);
        assert!(e.feasible);
    }

    #[test]
    fn deb2dk_at_origin() {
        let e = get("DEB2DK").evaluate(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(e.objectives[0], 0.0);
        assert!((e.objectives[1] - 7.75).abs() < 1e-12);
    }

    #[test]
    fn deb3dk_defaults_and_pole() {
        let p = get("DEB3DK");
        assert_eq!((p.dim(), p.n_objectives(), p.params()["K"]), (3, 3, 1.0));
        // x1 = 0: f = (0, 0, g r), r = 5 + 2.5 + cos(0) = 8.5 averaged with r(x2)
        let e = p.evaluate(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(&e.objectives[..2], &[0.0, 0.0]);
        assert!((e.objectives[2] - 8.5).abs() < 1e-12);
    }

    #[test]
    fn welded_beam_shape_and_linear_constraint() {
        let p = get("welded-beam");
        assert_eq!((p.dim(), p.n_objectives(), p.n_constraints()), (4, 2, 4));
        assert_eq!(p.domain().lower(), &[0.125, 0.125, 0.1, 0.1]);
        assert_eq!(p.domain().upper(), &[5.0, 5.0, 10.0, 10.0]);
        let e = p.evaluate(&[1.0, 2.0, 5.0, 5.0]).unwrap();
        assert_eq!(e.constraints[2], 1.0);
        assert!(p.lipschitz_g().is_some());
    }

    #[test]
    fn welded_beam_known_feasible_design() {
        // a stiff, well-welded beam satisfies every constraint
        let e = get("welded-beam").evaluate(&[1.0, 2.0, 3.0, 9.0]).unwrap();
        assert!(e.feasible, "{:?}", e.constraints);
    }

    fn enclosure_never_underestimates(name: &str) {
        let p = get(name);
        let (dlo, dhi) = (p.domain().lower().to_vec(), p.domain().upper().to_vec());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let (mut lo, mut hi) = (Vec::new(), Vec::new());
            for k in 0..dlo.len() {
                let a = rng.gen_range(dlo[k]..=dhi[k]);
                let b = rng.gen_range(dlo[k]..=dhi[k]);
                lo.push(a.min(b));
                hi.push(a.max(b));
            }
            let b = SearchBox::new(lo.clone(), hi.clone(), 0).unwrap();
            let bound = p.constraint_upper_bounds(&b).unwrap();
            for _ in 0..20 {
                let x: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| rng.gen_range(*l..=*h)).collect();
                let g = p.evaluate(&x).unwrap().constraints;
                for (gj, bj) in g.iter().zip(&bound) {
                    assert!(gj <= bj, "{name}: g = {g:?} exceeds {bound:?} at {x:?}");
                }
            }
        }
    }

    #[test]
    fn welded_beam_enclosure_is_sound() {
        enclosure_never_underestimates("welded-beam");
    }

    #[test]
    fn water_resources_enclosure_is_sound() {
        enclosure_never_underestimates("water-resources");
    }

    #[test]
    fn water_resources_shape() {
        let p = get("water-resources");
        assert_eq!((p.dim(), p.n_objectives(), p.n_constraints()), (3, 5, 7));
        assert_eq!(p.domain().lower(), &[0.01, 0.01, 0.01]);
        assert_eq!(p.domain().upper(), &[0.45, 0.1, 0.1]);
        let e = p.evaluate(&[0.3, 0.05, 0.05]).unwrap();
        assert!(e.feasible, "{:?}", e.constraints);
        assert!((e.objectives[1] - 900.0).abs() < 1e-9);
        // tiny x1*x2 violates the first constraint
        assert!(!p.evaluate(&[0.01, 0.01, 0.05]).unwrap().feasible);
    }

    #[test]
    fn name_lookup_is_lenient() {
        assert_eq!(get("mop").name(), "MOP");
        assert_eq!(get("welded_beam").name(), "welded-beam");
        assert!(matches!(
            get_problem("nope", &BTreeMap::new()),
            Err(Error::UnknownProblem(_))
        ));
    }

    #[test]
    fn knee_parameters_are_validated() {
        let mut params = BTreeMap::new();
        params.insert("K".to_string(), 0.0);
        assert!(get_problem("DEB2DK", &params).is_err());
        params.insert("K".to_string(), 2.0);
        params.insert("n".to_string(), 1.0);
        assert!(get_problem("DEB2DK", &params).is_err());
        params.insert("n".to_string(), 5.0);
        let p = get_problem("DEB2DK", &params).unwrap();
        assert_eq!(p.dim(), 5);
        params.insert("bogus".to_string(), 1.0);
        assert!(get_problem("DEB2DK", &params).is_err());
    }

    #[test]
    fn lipschitz_constants_are_cached() {
        let a = get("MOP");
        let b = get("MOP");
        assert_eq!(a.lipschitz_f(), b.lipschitz_f());
        assert!(a.lipschitz_f().iter().all(|&l| l > 0.0));
    }
}
