//! The sequence catalog: functional equations, brute-force oracles, the
//! Eulerian kernel and section pipeline, and the printed representations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::psi_core::PsiPoly;
use crate::ring3::pow3;
use crate::solver::{solve_mod3k, DiffPoly, FunctionalEq};

mod eulerian;
pub mod expr;
mod fixtures;
mod oracles;

pub use eulerian::{
    derive_eulerian, euler_kernel, eulerian_equation, EulerKernel, EulerianKind, EulerianReport,
};
pub use fixtures::{
    data_dir, fixture_ids, fixture_path, stored_fixture, transcribed_fixture, FixtureKey,
    Transcription,
};
pub use oracles::{
    apery2_by_recurrence, apery2_by_sum, apery3_by_recurrence, apery3_by_sum, central_eulerian_mod,
    eulerian_exact, free_subgroup_numbers, oracle_terms,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceId {
    AlmostCentralBinomial,
    Motzkin,
    MotzkinPrefix,
    Riordan,
    CentralTrinomial,
    CentralBinomial,
    CentralBinomialSums,
    Catalan,
    Delannoy,
    Schroeder,
    HexTree,
    FreeSubgroups(u64),
    EulerianEven,
    EulerianOdd,
    AperyZeta2,
    AperyZeta3,
}

impl SequenceId {
    /// Every id, with free subgroup numbers for m = 1.
    pub fn all() -> Vec<SequenceId> {
        use SequenceId::*;
        vec![
            AlmostCentralBinomial,
            Motzkin,
            MotzkinPrefix,
            Riordan,
            CentralTrinomial,
            CentralBinomial,
            CentralBinomialSums,
            Catalan,
            Delannoy,
            Schroeder,
            HexTree,
            FreeSubgroups(1),
            EulerianEven,
            EulerianOdd,
            AperyZeta2,
            AperyZeta3,
        ]
    }

    /// Ids whose generating function satisfies a catalog equation.
    pub fn quadratic() -> Vec<SequenceId> {
        Self::all()
            .into_iter()
            .filter(|id| catalog(*id).is_ok())
            .collect()
    }

    pub fn base_name(&self) -> &'static str {
        use SequenceId::*;
        match self {
            AlmostCentralBinomial => "almost_central_binomial",
            Motzkin => "motzkin",
            MotzkinPrefix => "motzkin_prefix",
            Riordan => "riordan",
            CentralTrinomial => "central_trinomial",
            CentralBinomial => "central_binomial",
            CentralBinomialSums => "central_binomial_sums",
            Catalan => "catalan",
            Delannoy => "delannoy",
            Schroeder => "schroeder",
            HexTree => "hex_tree",
            FreeSubgroups(_) => "free_subgroups",
            EulerianEven => "eulerian_even",
            EulerianOdd => "eulerian_odd",
            AperyZeta2 => "apery_zeta2",
            AperyZeta3 => "apery_zeta3",
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::FreeSubgroups(m) => write!(f, "free_subgroups,m={m}"),
            other => f.write_str(other.base_name()),
        }
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    /// Accepts `name`, `name,m=<int>` and `name(<int>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, m) = if let Some((n, rest)) = s.split_once(",m=") {
            (n, Some(rest))
        } else if let Some((n, rest)) = s.split_once('(') {
            (n, Some(rest.trim_end_matches(')')))
        } else {
            (s, None)
        };
        let bad = || Error::UnsupportedId(s.to_string());
        let id = match name {
            "free_subgroups" => {
                let m: u64 = match m {
                    Some(v) => v.trim().parse().map_err(|_| bad())?,
                    None => 1,
                };
                if m == 0 || m.is_multiple_of(3) {
                    return Err(bad());
                }
                SequenceId::FreeSubgroups(m)
            }
            _ if m.is_some() => return Err(bad()),
            other => *Self::all()
                .iter()
                .find(|id| id.base_name() == other)
                .ok_or_else(bad)?,
        };
        Ok(id)
    }
}

fn quad(
    name: &str,
    c2: &[i64],
    c1: &[i64],
    c0: &[i64],
    eps: i8,
    gamma: u32,
    init: &[i64],
) -> FunctionalEq {
    FunctionalEq {
        name: name.to_string(),
        c0: c0.to_vec(),
        c1: c1.to_vec(),
        c2: c2.to_vec(),
        q: DiffPoly::zero(),
        eps,
        gamma,
        init: init.to_vec(),
    }
}

/// The functional equation of a quadratic-catalog sequence.
pub fn catalog(id: SequenceId) -> Result<FunctionalEq> {
    use SequenceId::*;
    let name = id.to_string();
    let eq = match id {
        // (1-4z) z^2 A^2 + (1-4z) A - 1
        AlmostCentralBinomial => quad(&name, &[0, 0, 1, -4], &[1, -4], &[-1], -1, 1, &[]),
        Motzkin => quad(&name, &[0, 0, 1], &[-1, 1], &[1], 1, 1, &[]),
        MotzkinPrefix => quad(&name, &[0, 1, -3], &[1, -3], &[-1], 1, 1, &[]),
        Riordan => quad(&name, &[0, 1, 1], &[-1, -1], &[1], 1, 1, &[]),
        CentralTrinomial => quad(&name, &[1, -2, -3], &[], &[-1], 1, 1, &[1]),
        CentralBinomial => quad(&name, &[1, -4], &[], &[-1], -1, 1, &[1]),
        // (1-4z)(1-z)^2 = 1 - 6z + 9z^2 - 4z^3
        CentralBinomialSums => quad(&name, &[1, -6, 9, -4], &[], &[-1], -1, 1, &[1]),
        Catalan => quad(&name, &[0, 1], &[-1], &[1], -1, 1, &[]),
        Delannoy => quad(&name, &[1, -6, 1], &[], &[-1], 1, 2, &[1]),
        Schroeder => quad(&name, &[0, 1], &[-1, 1], &[1], 1, 2, &[]),
        HexTree => quad(&name, &[0, 0, 1], &[-1, 3], &[1], -1, 2, &[]),
        FreeSubgroups(m) => {
            let m = m as i64;
            let mut eq = quad(
                &name,
                &[0, -1],
                &[1, -(6 * m - 2)],
                &[-1, -(1 - 6 * m + 5 * m * m)],
                1,
                2,
                &[],
            );
            eq.q = DiffPoly::term(&[0, 0, -2 * m], &[1]);
            eq
        }
        _ => return Err(Error::UnsupportedId(name)),
    };
    Ok(eq)
}

/// Smallest alpha with 3^alpha >= e.
pub fn alpha_for(e: u32) -> u32 {
    let mut a = 1;
    while pow3(a) < e as u64 {
        a += 1;
    }
    a
}

/// Generating function of `id` modulo 3^e, derived from its equation (or the
/// Eulerian section pipeline) at the given alpha.
pub fn derive(id: SequenceId, e: u32, alpha: u32) -> Result<PsiPoly> {
    if e == 0 || pow3(alpha) < e as u64 {
        return Err(Error::Parse(format!(
            "modulus 3^{e} needs alpha >= {}",
            alpha_for(e.max(1))
        )));
    }
    match id {
        SequenceId::EulerianEven | SequenceId::EulerianOdd => {
            if !(2..=3).contains(&e) {
                return Err(Error::UnsupportedId(format!(
                    "{id} mod 3^{e} (Eulerian sections exist mod 9 and 27)"
                )));
            }
            let kind = if id == SequenceId::EulerianEven {
                EulerianKind::Even
            } else {
                EulerianKind::Odd
            };
            Ok(derive_eulerian(kind, e, alpha)?.representation)
        }
        _ => Ok(solve_mod3k(&catalog(id)?, alpha)?.representation.reduce(e)),
    }
}

/// The linear equation shifted from the zeta(2) Apery recurrence, which has
/// no unique solution modulo 3.
pub fn apery0_equation() -> DiffPoly {
    DiffPoly::term(&[-1, 25, 4], &[0])
        .add(&DiffPoly::term(&[0, -3, 44, 5], &[1]))
        .add(&DiffPoly::term(&[0, 0, -1, 11, 1], &[2]))
        .add(&DiffPoly::constant(&[3, 1]))
}

/// (z F^2 - F + 1)^2, which pins down the Catalan series modulo 3 only.
pub fn catalan_squared_equation() -> DiffPoly {
    let base = DiffPoly::term(&[0, 1], &[0, 0])
        .add(&DiffPoly::term(&[-1], &[0]))
        .add(&DiffPoly::constant(&[1]));
    base.pow(2)
}
