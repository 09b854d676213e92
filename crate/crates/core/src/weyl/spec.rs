use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coeffring::{AlgebraicContext, Var};
use crate::error::{Error, Result};

/// Most space variables any chart uses.
pub const MAX_SPACE: usize = 3;

/// A coordinate chart: ordered space variables, the coefficient context and
/// the parameter symbols.
#[derive(Debug, PartialEq, Eq)]
pub struct VariableSpec {
    name: String,
    space: Vec<Var>,
    params: Vec<Var>,
    ctx: AlgebraicContext,
}

impl VariableSpec {
    pub fn new(name: &str, space: &[Var], params: &[Var], ctx: AlgebraicContext) -> Result<Arc<Self>> {
        if space.is_empty() || space.len() > MAX_SPACE {
            return Err(Error::Invalid(format!("chart `{name}` needs 1..={MAX_SPACE} space variables")));
        }
        if let Some(v) = space.iter().find(|v| params.contains(v)) {
            return Err(Error::Invalid(format!("`{v}` is both a space variable and a parameter")));
        }
        for v in space {
            if !ctx.derivations().iter().any(|d| d.coord == *v) {
                return Err(Error::Invalid(format!("context `{}` has no derivation for `{v}`", ctx.name())));
            }
        }
        Ok(Arc::new(VariableSpec { name: name.to_string(), space: space.to_vec(), params: params.to_vec(), ctx }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &[Var] {
        &self.space
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn ctx(&self) -> &AlgebraicContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn position(&self, v: Var) -> Result<usize> {
        self.space
            .iter()
            .position(|s| *s == v)
            .ok_or_else(|| Error::NotASpaceVariable(v, self.name.clone()))
    }

    /// Whether `v` may appear in a coefficient on this chart.
    pub fn allows_symbol(&self, v: Var) -> bool {
        self.space.contains(&v)
            || self.params.contains(&v)
            || self.ctx.is_adjunct(v)
            || self.ctx.derivations().iter().any(|d| d.images.iter().any(|(s, _)| *s == v))
    }

    /// Preset chart by name (`xyz`, `r-rho-phi`, `r-rho`, `r-u`, `r-u+rho`,
    /// `r`, `sphere`).
    pub fn by_name(name: &str) -> Result<Arc<Self>> {
        Ok(match name {
            "xyz" => Self::cartesian3d(),
            "r-rho-phi" => Self::polar(),
            "r-rho" => Self::r_rho(),
            "r-u" => Self::r_u(),
            "r-u+rho" => Self::r_u_with_rho(),
            "r" => Self::line_r(),
            "sphere" => Self::sphere(),
            _ => return Err(Error::Invalid(format!("unknown chart `{name}`"))),
        })
    }

    /// Cartesian `(x, y, z)` with `r` adjoined; parameters `alpha, E, beta`.
    pub fn cartesian3d() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new(
                "xyz",
                &[Var::X, Var::Y, Var::Z],
                &[Var::Alpha, Var::E, Var::Beta],
                AlgebraicContext::cartesian3d(),
            )
            .expect("valid chart")
        })
        .clone()
    }

    /// Cylindrical-type chart `(r, rho, phi)`.
    pub fn polar() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new(
                "r-rho-phi",
                &[Var::R, Var::Rho, Var::Phi],
                &[Var::Beta, Var::Mu, Var::P, Var::E, Var::Alpha],
                AlgebraicContext::flat("r-rho-phi", &[Var::R, Var::Rho, Var::Phi]),
            )
            .expect("valid chart")
        })
        .clone()
    }

    /// Meridian chart `(r, rho)`.
    pub fn r_rho() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new(
                "r-rho",
                &[Var::R, Var::Rho],
                &[Var::Beta, Var::Mu, Var::P, Var::E, Var::Alpha],
                AlgebraicContext::flat("r-rho", &[Var::R, Var::Rho]),
            )
            .expect("valid chart")
        })
        .clone()
    }

    /// Algebraic chart `(r, u = rho^2)`.
    pub fn r_u() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new(
                "r-u",
                &[Var::R, Var::U],
                &[Var::Beta, Var::Mu, Var::P, Var::N, Var::Lambda],
                AlgebraicContext::flat("r-u", &[Var::R, Var::U]),
            )
            .expect("valid chart")
        })
        .clone()
    }

    /// `(r, u)` with `rho = sqrt(u)` available in coefficients.
    pub fn r_u_with_rho() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new(
                "r-u+rho",
                &[Var::R, Var::U],
                &[Var::Beta, Var::Mu, Var::P],
                AlgebraicContext::ru_with_rho(),
            )
            .expect("valid chart")
        })
        .clone()
    }

    /// Single variable `r`, for the sl(2) realization.
    pub fn line_r() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new("r", &[Var::R], &[Var::N], AlgebraicContext::flat("r", &[Var::R])).expect("valid chart")
        })
        .clone()
    }

    /// `(theta, phi)` on the round sphere.
    pub fn sphere() -> Arc<Self> {
        static S: OnceLock<Arc<VariableSpec>> = OnceLock::new();
        S.get_or_init(|| {
            VariableSpec::new("sphere", &[Var::Theta, Var::Phi], &[], AlgebraicContext::sphere_chart())
                .expect("valid chart")
        })
        .clone()
    }
}

impl fmt::Display for VariableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (k, v) in self.space.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn same_spec(a: &Arc<VariableSpec>, b: &Arc<VariableSpec>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpecMismatch(a.name.clone(), b.name.clone()))
    }
}
