//! Worst-case profiles of an attribute family over a range of dimensions,
//! the local type read off a profile, and reachability checks.

mod profile;
mod reach;

use serde::Serialize;

use crate::error::{Error, Result};

pub use profile::{worst_table, worstcase_profile, ProfileEntry, WorstCaseProfile, PROFILE_CSV_HEADER};
pub use reach::{
    verify_boundary_la_pair, verify_reachability, BoundaryReport, Certificate, ReachKind, ReachabilityReport,
    Reachable, SearchRecord,
};

/// Slack allowed above `⌈log₂ N⌉` before a logarithmic depth profile is
/// considered inconsistent.
pub const LOG_SLACK: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DepthType {
    #[serde(rename = "LOG")]
    Log,
    #[serde(rename = "LIN")]
    Lin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleDepthType {
    #[serde(rename = "CON")]
    Con,
    #[serde(rename = "LIN")]
    Lin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SizeType {
    #[serde(rename = "POL")]
    Pol,
    #[serde(rename = "EXP")]
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WClass {
    W1,
    W2,
    W3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalType {
    pub family: String,
    pub h_ld_type: DepthType,
    pub h_la_type: RuleDepthType,
    #[serde(rename = "L_type")]
    pub l_type: SizeType,
    pub w_class: WClass,
    /// Largest dimension profiled; the types are only claimed at this scale.
    pub scale: usize,
    pub note: String,
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Reads the behaviour types off a profile and maps them to a class.
///
/// Depth is linear when `h_ld(n) = n` throughout. Rule depth is constant
/// when `h_la` does not change over the upper half of the profiled entries.
/// Size is exponential when `L_ld(n) = 2ⁿ⁺¹` throughout.
pub fn local_type(profile: &WorstCaseProfile) -> Result<LocalType> {
    let entries = &profile.entries;
    let scale = entries.iter().map(|e| e.n).max().unwrap_or(0);
    if entries.len() < 4 || scale < 4 {
        return Err(Error::Unsupported(format!(
            "local type needs a profile with at least four entries reaching n >= 4, got {} up to n = {scale}",
            entries.len()
        )));
    }
    let bad = |msg: String| Err(Error::InconsistentProfile(format!("{}: {msg}", profile.family)));

    let h_ld_type = if entries.iter().all(|e| e.h_ld as usize == e.n) {
        DepthType::Lin
    } else {
        if let Some(e) = entries.iter().find(|e| e.h_ld > ceil_log2(e.realizable) + LOG_SLACK) {
            return bad(format!(
                "h_ld({}) = {} is neither n nor within {LOG_SLACK} of ceil(log2 N) = {}",
                e.n,
                e.h_ld,
                ceil_log2(e.realizable)
            ));
        }
        DepthType::Log
    };

    let window = &entries[entries.len() / 2..];
    let h_la_type = if window.iter().all(|e| e.h_la == window[0].h_la) {
        RuleDepthType::Con
    } else if entries.iter().all(|e| e.h_la as usize == e.n) {
        RuleDepthType::Lin
    } else {
        return bad("h_la is neither constant over the upper half of the range nor equal to n".into());
    };

    let l_type = if entries.iter().all(|e| e.n < 63 && e.l_ld as u64 == 1u64 << (e.n + 1)) {
        SizeType::Exp
    } else {
        let over = entries.iter().find(|e| {
            let bound = (4 * e.n as u128)
                .checked_pow(e.idim as u32)
                .map_or(u128::MAX, |b| b.saturating_mul(2));
            e.l_ld as u128 > bound
        });
        if let Some(e) = over {
            return bad(format!("L_ld({}) = {} exceeds 2(4n)^idim", e.n, e.l_ld));
        }
        SizeType::Pol
    };

    let w_class = match (h_ld_type, h_la_type, l_type) {
        (DepthType::Log, RuleDepthType::Con, SizeType::Pol) => WClass::W1,
        (DepthType::Lin, RuleDepthType::Lin, SizeType::Pol) => WClass::W2,
        (DepthType::Lin, RuleDepthType::Lin, SizeType::Exp) => WClass::W3,
        other => return bad(format!("combination {other:?} matches no possible local type")),
    };
    Ok(LocalType {
        family: profile.family.clone(),
        h_ld_type,
        h_la_type,
        l_type,
        w_class,
        scale,
        note: format!("types observed on n = 1..{scale} only; constancy judged on the upper half of the range"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::AttributeFamily;

    #[test]
    fn ceil_log2_values() {
        assert_eq!([1, 2, 3, 4, 5, 8, 9].map(ceil_log2), [0, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn three_families_three_classes() {
        let u1 = local_type(&worstcase_profile(&AttributeFamily::threshold(), 1..=6).unwrap()).unwrap();
        assert_eq!(
            (u1.h_ld_type, u1.h_la_type, u1.l_type, u1.w_class),
            (DepthType::Log, RuleDepthType::Con, SizeType::Pol, WClass::W1)
        );
        let u2 = local_type(&worstcase_profile(&AttributeFamily::point(), 1..=5).unwrap()).unwrap();
        assert_eq!(
            (u2.h_ld_type, u2.h_la_type, u2.l_type, u2.w_class),
            (DepthType::Lin, RuleDepthType::Lin, SizeType::Pol, WClass::W2)
        );
        let u3 = local_type(&worstcase_profile(&AttributeFamily::Full, 1..=4).unwrap()).unwrap();
        assert_eq!(
            (u3.h_ld_type, u3.h_la_type, u3.l_type, u3.w_class),
            (DepthType::Lin, RuleDepthType::Lin, SizeType::Exp, WClass::W3)
        );
        assert_eq!(u3.scale, 4);
        let text = serde_json::to_string(&u1).unwrap();
        assert!(text.starts_with(
            r#"{"family":"u1","h_ld_type":"LOG","h_la_type":"CON","L_type":"POL","w_class":"W1","scale":6"#
        ));
    }

    #[test]
    fn short_profiles_are_refused() {
        let p = worstcase_profile(&AttributeFamily::threshold(), 1..=3).unwrap();
        assert!(matches!(local_type(&p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inconsistent_profiles_are_reported() {
        let mut p = worstcase_profile(&AttributeFamily::point(), 1..=4).unwrap();
        // Linear depth with constant rule depth is not a possible type.
        for e in &mut p.entries {
            e.h_la = 1;
        }
        assert!(matches!(local_type(&p), Err(Error::InconsistentProfile(_))));
    }
}
