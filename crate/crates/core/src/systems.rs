//! Ready-made state families.
//!
//! | id                  | kind         | definition                   | radius |
//! |---------------------|--------------|------------------------------|--------|
//! | `harmonic`          | nonlinearity | `f(n) = 1`                   | ∞      |
//! | `penson-solomon`    | nonlinearity | `f(n) = q^(1-n)`             | ∞      |
//! | `barut-girardello`  | nonlinearity | `f(n) = √(n + 2κ - 1)`       | ∞      |
//! | `gilmore-perelomov` | nonlinearity | `f(n) = 1/√(n + 2κ - 1)`     | 1      |
//! | `hydrogen`          | spectrum     | `e_n = 1 - 1/(n+1)²`         | 1      |
//! | `poschl-teller`     | spectrum     | `e_n = n(n + ν)`             | ∞      |
//! | `infinite-well`     | spectrum     | `e_n = n(n + 2)`             | ∞      |
//! | `isotonic`          | spectrum     | `e_n = 4n`                   | ∞      |
//!
//! The isotonic oscillator keeps its `γ` parameter (`gamma_p`) even though
//! the ground-shifted spectrum `e_n = ε_n - 2γ = 4n` does not depend on it.
//! Every result for `isotonic` is therefore identical for all valid `γ`.
//!
//! Each constructor evaluates its formula with the same floating-point
//! operations, in the same order, as its reference expression string, so a
//! spec compiled from [`CatalogDescriptor::reference_expr`] reproduces the
//! catalog values bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::dsl::ExprKind;
use crate::error::{Error, Result};
use crate::series::StateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    Harmonic,
    PensonSolomon,
    BarutGirardello,
    GilmorePerelomov,
    HydrogenLike,
    PoschlTeller,
    InfiniteWell,
    Isotonic,
}

impl SystemId {
    pub const ALL: [SystemId; 8] = [
        SystemId::Harmonic,
        SystemId::PensonSolomon,
        SystemId::BarutGirardello,
        SystemId::GilmorePerelomov,
        SystemId::HydrogenLike,
        SystemId::PoschlTeller,
        SystemId::InfiniteWell,
        SystemId::Isotonic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Harmonic => "harmonic",
            SystemId::PensonSolomon => "penson-solomon",
            SystemId::BarutGirardello => "barut-girardello",
            SystemId::GilmorePerelomov => "gilmore-perelomov",
            SystemId::HydrogenLike => "hydrogen",
            SystemId::PoschlTeller => "poschl-teller",
            SystemId::InfiniteWell => "infinite-well",
            SystemId::Isotonic => "isotonic",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown system `{s}`")))
    }
}

/// Documentation for one named parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDoc {
    pub name: &'static str,
    pub default: f64,
    pub range: &'static str,
    pub doc: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogDescriptor {
    pub id: SystemId,
    pub summary: &'static str,
    pub params: Vec<ParamDoc>,
    /// Set when the entry is a fixed-parameter case of another entry.
    pub specialization_of: Option<(SystemId, &'static str)>,
    pub reference_kind: ExprKind,
    /// Expression in the spectrum DSL defining the same family.
    pub reference_expr: &'static str,
    pub radius: f64,
    /// Default `z` range for squeezing sweeps.
    pub sweep: (f64, f64),
    /// Default `z` values for phase-distribution plots.
    pub dist_z: [f64; 4],
}

const Q: ParamDoc = ParamDoc {
    name: "q",
    default: 0.5,
    range: "0 < q <= 1",
    doc: "deformation parameter; q = 1 gives the harmonic oscillator",
};

const KAPPA: ParamDoc = ParamDoc {
    name: "kappa",
    default: 3.0,
    range: "kappa >= 1/2 (half-integers for a group representation)",
    doc: "Bargmann index of the SU(1,1) discrete series",
};

const NU: ParamDoc = ParamDoc {
    name: "nu",
    default: 5.0,
    range: "nu > 2",
    doc: "nu = lambda + kappa of the potential",
};

const GAMMA_P: ParamDoc = ParamDoc {
    name: "gamma_p",
    default: 2.5,
    range: "gamma_p > 1",
    doc: "gamma = 1 + sqrt(1 + 4A)/2; cancels from the shifted spectrum e_n = 4n",
};

/// The catalog, in stable order.
pub fn list_catalog() -> Vec<CatalogDescriptor> {
    SystemId::ALL.into_iter().map(describe).collect()
}

pub fn describe(id: SystemId) -> CatalogDescriptor {
    let (summary, params, specialization_of, reference_kind, reference_expr, radius) = match id {
        SystemId::Harmonic => (
            "canonical coherent states, f(n) = 1",
            vec![],
            None,
            ExprKind::F,
            "1",
            f64::INFINITY,
        ),
        SystemId::PensonSolomon => (
            "Penson-Solomon states, f(n) = q^(1-n)",
            vec![Q],
            None,
            ExprKind::F,
            "q^(1-n)",
            f64::INFINITY,
        ),
        SystemId::BarutGirardello => (
            "SU(1,1) Barut-Girardello states, f(n) = sqrt(n + 2 kappa - 1)",
            vec![KAPPA],
            None,
            ExprKind::F,
            "sqrt(n + 2*kappa - 1)",
            f64::INFINITY,
        ),
        SystemId::GilmorePerelomov => (
            "SU(1,1) Gilmore-Perelomov states, f(n) = 1/sqrt(n + 2 kappa - 1), |z| < 1",
            vec![KAPPA],
            None,
            ExprKind::F,
            "1/sqrt(n + 2*kappa - 1)",
            1.0,
        ),
        SystemId::HydrogenLike => (
            "hydrogen-like spectrum e_n = 1 - 1/(n+1)^2, |z| < 1",
            vec![],
            None,
            ExprKind::E,
            "1 - 1/(n+1)^2",
            1.0,
        ),
        SystemId::PoschlTeller => (
            "Poschl-Teller spectrum e_n = n(n + nu)",
            vec![NU],
            None,
            ExprKind::E,
            "n*(n+nu)",
            f64::INFINITY,
        ),
        SystemId::InfiniteWell => (
            "infinite square well, e_n = n(n + 2)",
            vec![],
            Some((SystemId::PoschlTeller, "nu = 2")),
            ExprKind::E,
            "n*(n+2)",
            f64::INFINITY,
        ),
        SystemId::Isotonic => (
            "isotonic oscillator, shifted spectrum e_n = 4n (independent of gamma_p)",
            vec![GAMMA_P],
            None,
            ExprKind::E,
            "4*n",
            f64::INFINITY,
        ),
    };
    CatalogDescriptor {
        id,
        summary,
        params,
        specialization_of,
        reference_kind,
        reference_expr,
        radius,
        sweep: if radius.is_finite() { (0.05, 0.95) } else { (0.05, 5.0) },
        dist_z: if radius.is_finite() {
            [0.2, 0.4, 0.6, 0.8]
        } else {
            [0.5, 1.0, 1.5, 2.0]
        },
    }
}

/// A catalog id together with its parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: SystemId,
    pub params: BTreeMap<String, f64>,
}

impl CatalogEntry {
    /// Entry with every parameter at its default.
    pub fn new(id: SystemId) -> Self {
        let params = describe(id)
            .params
            .iter()
            .map(|p| (p.name.to_string(), p.default))
            .collect();
        CatalogEntry { id, params }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Result<Self> {
        self.set_param(name, value)?;
        Ok(self)
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        match self.params.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InvalidArgument(format!(
                "system `{}` has no parameter `{name}`",
                self.id
            ))),
        }
    }

    fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    /// Non-fatal remarks about the parameter choice.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if matches!(self.id, SystemId::BarutGirardello | SystemId::GilmorePerelomov) {
            let kappa = self.param("kappa");
            if (2.0 * kappa).fract() != 0.0 {
                out.push(format!(
                    "kappa = {kappa} is not a half-integer; the state is not an SU(1,1) discrete-series state"
                ));
            }
        }
        out
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.id.to_string();
        }
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.id, params.join(","))
    }
}

fn check(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, expected })
    }
}

fn poschl_teller(nu: f64, label: String) -> StateSpec {
    StateSpec::spectrum(label, f64::INFINITY, move |n| {
        let n = n as f64;
        n * (n + nu)
    })
}

/// Builds the state family of a catalog entry.
pub fn make(entry: &CatalogEntry) -> Result<StateSpec> {
    let label = entry.label();
    let spec = match entry.id {
        SystemId::Harmonic => StateSpec::nonlinearity(label, f64::INFINITY, |_| 1.0),
        SystemId::PensonSolomon => {
            let q = entry.param("q");
            check("q", q, q > 0.0 && q <= 1.0, "0 < q <= 1")?;
            StateSpec::nonlinearity(label, f64::INFINITY, move |n| {
                let exponent = 1.0 - n as f64;
                q.powi(exponent as i32)
            })
        }
        SystemId::BarutGirardello => {
            let kappa = entry.param("kappa");
            check("kappa", kappa, kappa >= 0.5, "kappa >= 1/2")?;
            StateSpec::nonlinearity(label, f64::INFINITY, move |n| (n as f64 + 2.0 * kappa - 1.0).sqrt())
        }
        SystemId::GilmorePerelomov => {
            let kappa = entry.param("kappa");
            check("kappa", kappa, kappa >= 0.5, "kappa >= 1/2")?;
            StateSpec::nonlinearity(label, 1.0, move |n| 1.0 / (n as f64 + 2.0 * kappa - 1.0).sqrt())
        }
        SystemId::HydrogenLike => StateSpec::spectrum(label, 1.0, |n| 1.0 - 1.0 / (n as f64 + 1.0).powi(2)),
        SystemId::PoschlTeller => {
            let nu = entry.param("nu");
            check("nu", nu, nu > 2.0, "nu > 2")?;
            poschl_teller(nu, label)
        }
        SystemId::InfiniteWell => poschl_teller(2.0, label),
        SystemId::Isotonic => {
            let gamma = entry.param("gamma_p");
            check("gamma_p", gamma, gamma > 1.0, "gamma_p > 1")?;
            StateSpec::spectrum(label, f64::INFINITY, |n| 4.0 * n as f64)
        }
    };
    Ok(spec)
}
