//! Printed representations, transcribed term by term, and their JSON copies
//! under the versioned data directory.

use std::path::PathBuf;

use super::expr::parse_coeff;
use super::SequenceId;
use crate::error::{Error, Result};
use crate::laurent::LaurentCoeff;
use crate::psi_core::{PsiContext, PsiPoly};

/// A printed representation: coefficients of Psi^i(eps z^(arg_scale*gamma)).
#[derive(Clone, Debug)]
pub struct Transcription {
    pub eps: i8,
    pub gamma: u32,
    /// 1 when the printed argument is eps z^gamma, 3 for eps z^(3 gamma)
    pub arg_scale: u32,
    pub terms: &'static [(usize, &'static str)],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FixtureKey {
    pub id: SequenceId,
    pub e: u32,
}

const fn tr(
    eps: i8,
    gamma: u32,
    arg_scale: u32,
    terms: &'static [(usize, &'static str)],
) -> Transcription {
    Transcription {
        eps,
        gamma,
        arg_scale,
        terms,
    }
}

fn transcription(id: SequenceId, e: u32) -> Option<Transcription> {
    use SequenceId::*;
    let t = match (id, e) {
        (AlmostCentralBinomial, 3) => tr(-1, 1, 1, &[
            (0, "13z^-2"),
            (1, "3(-(z+1)/z^2+3(1-z-z^2)/(z^2(1-z)))"),
            (3, "4+6z^-1-4z^-2"),
            (5, "3(4z+2-z^-1-5z^-2)"),
        ]),
        (Motzkin, 3) => tr(1, 1, 3, &[
            (0, "13z^-1+14z^-2"),
            (1, "9z+12+24z^-1+21z^-2"),
            (3, "9z^5+12z^4+10z^3+23z^2+25z+19+14z^-1+4z^-2"),
            (5, "-(9z^7+3z^6+24z^5+30z^4+6z^3+21z^2+6z+3+24z^-1+12z^-2)"),
        ]),
        (Motzkin, 2) => tr(1, 1, 3, &[
            (0, "4z^-1+5z^-2"),
            (1, "-(3+6z^-1+3z^-2)"),
            (3, "3z^4+4z^3+2z^2+1z+4+2z^-1+7z^-2"),
        ]),
        (MotzkinPrefix, 3) => tr(1, 1, 1, &[
            (0, "13z^-1"),
            (1, "9z+6z^-1+15"),
            (3, "-(6z^2+16z+4z^-1+14)"),
            (5, "-(9z^3+15z^2+18z+15z^-1)"),
        ]),
        (MotzkinPrefix, 2) => tr(1, 1, 1, &[
            (0, "4z^-1"),
            (1, "3(1+z^-1)"),
            (3, "3z^2-z+7+2z^-1"),
        ]),
        (Riordan, 3) => tr(1, 1, RIORDAN_ARG, &[
            (0, "14z^-1"),
            (1, "9+21z^-1"),
            (3, "9z^2+30z+25+4z^-1"),
            (5, "18z^2+24z+21+15z^-1"),
        ]),
        (Riordan, 2) => tr(1, 1, RIORDAN_ARG, &[
            (0, "-4z^-1"),
            (1, "-3z^-1"),
            (3, "3z+10+7z^-1"),
        ]),
        (CentralTrinomial, 3) => tr(1, 1, 3, &[
            (1, "-(9z^2+24z+15)"),
            (3, "15z^5+25z^4+4z^3+12z^2+10z+19"),
            (5, "9z^8+6z^7+6z^6+9z^5+21z^4+3z^3+15z+24"),
        ]),
        (CentralTrinomial, 2) => tr(1, 1, 3, &[
            (1, "-3(z+1)"),
            (3, "-3z^5+z^4+7z^3+3z^2+4z+4"),
        ]),
        (CentralBinomial, 3) => tr(-1, 1, 1, &[
            (1, "9(1+z)/(1-z)+3"),
            (3, "-(4z+8)"),
            (5, "-(12z^2+12z+3)"),
        ]),
        (CentralBinomial, 2) => tr(-1, 1, 1, &[(1, "-3"), (3, "2z+4")]),
        (CentralBinomialSums, 3) => tr(-1, 1, 3, &[
            (1, "3+9(z+1)/(1-z)"),
            (3, "-4z^3+12z+19"),
            (5, "15z^6+9z^5+15z^3+18z^2+24"),
        ]),
        (CentralBinomialSums, 2) => tr(-1, 1, 3, &[(1, "-3"), (3, "4+3z+2z^3")]),
        (Catalan, 3) => tr(-1, 1, 1, &[
            (0, "-13z^-1"),
            (1, "-3(4+2z^-1)"),
            (3, "-8z-14+4z^-1"),
            (5, "3(z^2-6z+9-4z^-1)"),
        ]),
        (Catalan, 2) => tr(-1, 1, 1, &[
            (0, "-4z^-1"),
            (1, "3(1-z^-1)"),
            (3, "4z-2-2z^-1"),
        ]),
        (Delannoy, 3) => tr(1, 2, 1, &[
            (1, "3+9(z+2)^2/(1+z^2)"),
            (3, "19z^2+3z+19"),
            (5, "-(3z^4+9z^3+6z^2+9z+3)"),
        ]),
        (Delannoy, 2) => tr(1, 2, 1, &[(1, "-3"), (3, "4z^2+3z+4")]),
        (Schroeder, 3) => tr(1, 2, 1, &[
            (0, "13+14z^-1"),
            (1, "21z+18+21z^-1"),
            (3, "4z^3+15z^2+17z+15+4z^-1"),
            (5, "15z^5+9z^4+18z^3+18z^2+18z+9+15z^-1"),
        ]),
        (Schroeder, 2) => tr(1, 2, 1, &[
            (0, "4+5z^-1"),
            (1, "-3(z+z^-1)"),
            (3, "-(2z^3+3z^2+4z+3+2z^-1)"),
        ]),
        (HexTree, 3) => tr(-1, 2, 1, &[
            (0, "12z^-1+14z^-2"),
            (1, "-3(4+3z^-1+2z^-2)"),
            (3, "z^2+21z+13+15z^-1+4z^-2"),
            (5, "3(z^4+3z^3+12z^2+21z+3z^-1+14z^-2)"),
        ]),
        (HexTree, 2) => tr(-1, 2, 1, &[
            (0, "-4z^-2"),
            (1, "3(1+3z^-1+2z^-2)"),
            (3, "4z^2+7+7z^-2"),
        ]),
        (FreeSubgroups(m), 3) if m % 3 == 1 => tr(1, 2, 3, &[
            (0, "1-z^-1-3(z+2)(z^2+2z+2)/(z(z^2+1))-(9+3(m-1)z^4)/(z^2+1)^2"),
            (1, "3mz^3+(3m+21)z+21z^-1"),
            (3, "(-2m+18)z^9+(-m^2+6m+18)z^7+(-3m+25)z^5+(m+15)z^3+(2m^2-3m+6)z+4z^-1"),
            (5, "(-3m+9)z^15+(-3m+6)z^13+15z^11+(3m+9)z^9+(3m+3)z^7+3z^5+(-3m+9)z^3+(-3m+6)z+15z^-1"),
        ]),
        (FreeSubgroups(m), 3) if m % 3 == 2 => tr(1, 2, 3, &[
            (0, "1-z^-1+3(z+1)(z^2+z+2)/(z(z^2+1))+(9+18z+18z^2+9z^3+9z^4-(3m-24)z^5)/(z^2+1)^2"),
            (1, "-3mz^3+(-3m+21)z+21z^-1"),
            (3, "(15m^2-4m+24)z^9+(-m^2+3m)z^7+(3m-2)z^5+(-m+15)z^3+(14m^2+18)z+4z^-1"),
            (5, "(3m+9)z^15+(3m+6)z^13+15z^11+(-3m+9)z^9+(-3m+3)z^7+3z^5+(3m+9)z^3+(3m+6)z+15z^-1"),
        ]),
        (FreeSubgroups(m), 2) if m % 3 == 1 => tr(1, 2, 3, &[
            (0, "1-4z^-1-3z^2/(z^2+1)"),
            (1, "-3z^-1(z^2+1)^2"),
            (3, "mz^9+(m+1)z^7+7z^5+mz^3+(m+1)z+7z^-1"),
        ]),
        (FreeSubgroups(m), 2) if m % 3 == 2 => tr(1, 2, 3, &[
            (0, "1+5z^-1+3z^2/(z^2+1)"),
            (1, "-3z^-1(1+z^2)^2"),
            (3, "-(mz^9+(m-1)z^7+2z^5+mz^3+(m-1)z+2z^-1)"),
        ]),
        (EulerianEven, 2) => tr(1, 1, 1, &[
            (0, "-1"),
            (1, "3(z+1)"),
            (3, "(3z^4+2z^3+6z^2+2)/(1+z)"),
        ]),
        (EulerianEven, 3) => tr(1, 1, 1, &[
            (0, "14"),
            (1, "3(3z^2-4z+2)"),
            (3, "21z^3+20z^2+13z+23"),
            (5, "3(6z^4+4z^3+3z^2+4)"),
        ]),
        (EulerianOdd, 2) => tr(1, 1, 1, &[(1, "-3z"), (3, "6z^4+6z^3+4z^2+4z")]),
        (EulerianOdd, 3) => tr(1, 1, 1, &[
            (1, "-3z(3z^2+5)"),
            (3, "z(24z^3+15z^2+10z+19)"),
            (5, "3z(3z^4+6z^3+2z^2+7z+8)"),
        ]),
        _ => return None,
    };
    Some(t)
}

/// The Riordan representations are in Psi(z), not Psi(z^3).
const RIORDAN_ARG: u32 = 1;

/// Every (id, modulus exponent) with a stored JSON document.
pub fn fixture_ids() -> Vec<FixtureKey> {
    use SequenceId::*;
    let mut out = Vec::new();
    let both = [
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
        EulerianEven,
        EulerianOdd,
    ];
    out.push(FixtureKey {
        id: AlmostCentralBinomial,
        e: 3,
    });
    for id in both {
        out.push(FixtureKey { id, e: 3 });
        out.push(FixtureKey { id, e: 2 });
    }
    for m in [1, 2] {
        out.push(FixtureKey {
            id: FreeSubgroups(m),
            e: 3,
        });
    }
    for m in [1, 2, 4, 5] {
        out.push(FixtureKey {
            id: FreeSubgroups(m),
            e: 2,
        });
    }
    out
}

/// The representation parsed from its transcription.
pub fn transcribed_fixture(id: SequenceId, e: u32) -> Result<PsiPoly> {
    let t = transcription(id, e).ok_or_else(|| Error::NoFixture {
        id: id.to_string(),
        e,
    })?;
    let m = match id {
        SequenceId::FreeSubgroups(m) => m as i64,
        _ => 0,
    };
    let ctx = PsiContext::new(t.eps, t.gamma, 1, e);
    let lc = ctx.lc();
    let mut coeffs = vec![LaurentCoeff::zero(lc); ctx.len()];
    for &(i, src) in t.terms {
        let mut a = parse_coeff(lc, src, m)?;
        if t.arg_scale == 3 {
            // Psi(u^3) = Psi(u) / (1+u)
            a = a.mul_base_pow(-(i as i64));
        }
        coeffs[i] = coeffs[i].add(&a);
    }
    Ok(PsiPoly::from_coeffs(ctx, coeffs))
}

/// `PSICONG_DATA_DIR`, or the data directory shipped with the crate.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("PSICONG_DATA_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/v1")),
    }
}

pub fn fixture_path(id: SequenceId, e: u32) -> PathBuf {
    let name = match id {
        SequenceId::FreeSubgroups(m) => format!("free_subgroups_m{m}"),
        other => other.base_name().to_string(),
    };
    data_dir().join(format!("{name}_{}.json", 3u64.pow(e)))
}

/// The printed representation of `id` modulo 3^e. Reads the JSON document
/// when one is stored and otherwise evaluates the transcription (free
/// subgroup numbers for other m).
pub fn stored_fixture(id: SequenceId, e: u32) -> Result<PsiPoly> {
    let path = fixture_path(id, e);
    match std::fs::read_to_string(&path) {
        Ok(text) => {
            let v: serde_json::Value = serde_json::from_str(&text)
                .map_err(|err| Error::Parse(format!("{}: {err}", path.display())))?;
            PsiPoly::from_json(&v)
        }
        Err(_) if !fixture_ids().contains(&FixtureKey { id, e }) => transcribed_fixture(id, e),
        Err(err) => Err(Error::Io(format!("{}: {err}", path.display()))),
    }
}
