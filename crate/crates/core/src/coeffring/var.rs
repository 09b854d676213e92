use std::fmt;

/// Number of symbols in the global symbol table.
pub const NVARS: usize = 17;

/// Every indeterminate the engine knows about, in declaration order.
///
/// The declaration order is the variable order of the graded-lexicographic
/// monomial order: `X` is the largest variable, `Lambda` the smallest.
/// Space variables come first, parameters after them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
    R,
    Rho,
    U,
    Phi,
    Theta,
    /// `sin(theta)`, only used by the round-sphere curvature oracle.
    SinTheta,
    /// `cos(theta)`, ditto.
    CosTheta,
    Beta,
    /// The magnetic quantum number `|m|`.
    Mu,
    /// Parity in the z-direction.
    P,
    Alpha,
    E,
    /// Mark of a g(2) representation.
    N,
    /// Spectral variable of characteristic polynomials.
    Lambda,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::R,
        Var::Rho,
        Var::U,
        Var::Phi,
        Var::Theta,
        Var::SinTheta,
        Var::CosTheta,
        Var::Beta,
        Var::Mu,
        Var::P,
        Var::Alpha,
        Var::E,
        Var::N,
        Var::Lambda,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::R => "r",
            Var::Rho => "rho",
            Var::U => "u",
            Var::Phi => "phi",
            Var::Theta => "theta",
            Var::SinTheta => "sin_theta",
            Var::CosTheta => "cos_theta",
            Var::Beta => "beta",
            Var::Mu => "mu",
            Var::P => "p",
            Var::Alpha => "alpha",
            Var::E => "E",
            Var::N => "n",
            Var::Lambda => "lambda",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
