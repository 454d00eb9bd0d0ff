//! The ±1 weight sequences and their summatory functions.
//!
//! Indexing is 0-based. Terms come from closed forms in O(log n), so sparse
//! indices such as `2^j (4t + 1) - 1` cost nothing extra.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    Paperfold,
    ThueMorse,
    AlternatingSign,
}

impl SeqKind {
    pub const ALL: [SeqKind; 3] = [
        SeqKind::Paperfold,
        SeqKind::ThueMorse,
        SeqKind::AlternatingSign,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SeqKind::Paperfold => "paperfold",
            SeqKind::ThueMorse => "thuemorse",
            SeqKind::AlternatingSign => "alternating",
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeqKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "paperfold" | "paperfolding" | "pf" => Ok(SeqKind::Paperfold),
            "thuemorse" | "tm" => Ok(SeqKind::ThueMorse),
            "alternating" | "alternatingsign" | "alt" => Ok(SeqKind::AlternatingSign),
            _ => Err(Error::Usage(format!("unknown sequence kind '{s}'"))),
        }
    }
}

/// Number of set bits in the binary expansion of `n`.
pub fn digit_sum(n: u64) -> u32 {
    n.count_ones()
}

/// `u_n` as +1 or -1.
pub fn seq_term(kind: SeqKind, n: u64) -> i8 {
    match kind {
        // n + 1 = 2^j (2k + 1) gives (-1)^k, read off the bit above the lowest set bit
        SeqKind::Paperfold => {
            let m = (n as u128) + 1;
            let k_odd = (m >> (m.trailing_zeros() + 1)) & 1;
            if k_odd == 1 {
                -1
            } else {
                1
            }
        }
        SeqKind::ThueMorse => {
            if digit_sum(n).is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        SeqKind::AlternatingSign => {
            if n.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummatoryValue {
    pub n: u64,
    pub s: i64,
}

fn paperfold_sum(n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let m = n / 2;
    // S(2m) = (1 - (-1)^m)/2 + S(m), and the odd step adds e_{2m} = (-1)^m
    let even = (m % 2) as i64 + paperfold_sum(m);
    if n.is_multiple_of(2) {
        even
    } else {
        even + if m.is_multiple_of(2) { 1 } else { -1 }
    }
}

/// `S(n) = sum_{k < n} u_k`, exact.
pub fn summatory(kind: SeqKind, n: u64) -> SummatoryValue {
    let s = match kind {
        SeqKind::Paperfold => paperfold_sum(n),
        // consecutive pairs (2m, 2m+1) cancel
        SeqKind::ThueMorse => {
            if n.is_multiple_of(2) {
                0
            } else {
                seq_term(kind, n - 1) as i64
            }
        }
        SeqKind::AlternatingSign => (n % 2) as i64,
    };
    SummatoryValue { n, s }
}

/// Exact test of `|S| <= 1 + log2 n`, i.e. `2^(|S| - 1) <= n`.
pub fn within_log_bound(v: &SummatoryValue) -> bool {
    let a = v.s.unsigned_abs();
    a == 0 || (a - 1 < 64 && (1u64 << (a - 1)) <= v.n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n_max: u64,
    pub max_ratio: f64,
    pub worst_n: u64,
    pub all_within: bool,
}

/// Scans paperfolding partial sums for `1 <= n <= n_max` against `1 + log2 n`.
pub fn summatory_bound_report(n_max: u64) -> crate::Result<BoundReport> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut s: i64 = 0;
    let mut report = BoundReport {
        n_max,
        max_ratio: 0.0,
        worst_n: 1,
        all_within: true,
    };
    for n in 1..=n_max {
        s += seq_term(SeqKind::Paperfold, n - 1) as i64;
        if !within_log_bound(&SummatoryValue { n, s }) {
            report.all_within = false;
        }
        let ratio = s.unsigned_abs() as f64 / (1.0 + (n as f64).log2());
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.worst_n = n;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn paperfold_recurrence(n: u64) -> i8 {
        if n.is_multiple_of(2) {
            if (n / 2).is_multiple_of(2) {
                1
            } else {
                -1
            }
        } else {
            paperfold_recurrence(n / 2)
        }
    }

    #[test]
    fn first_terms() {
        let pf: Vec<i8> = (0..4).map(|n| seq_term(SeqKind::Paperfold, n)).collect();
        assert_eq!(pf, [1, 1, -1, 1]);
        let tm: Vec<i8> = (0..4).map(|n| seq_term(SeqKind::ThueMorse, n)).collect();
        assert_eq!(tm, [1, -1, -1, 1]);
        let alt: Vec<i8> = (0..4)
            .map(|n| seq_term(SeqKind::AlternatingSign, n))
            .collect();
        assert_eq!(alt, [1, -1, 1, -1]);
    }

    #[test]
    fn closed_form_matches_recurrence_below_two_pow_20() {
        for n in 0..(1u64 << 20) {
            assert_eq!(
                seq_term(SeqKind::Paperfold, n),
                paperfold_recurrence(n),
                "n = {n}"
            );
        }
        let n = (1u64 << 20) - 1;
        assert_eq!(
            seq_term(SeqKind::Paperfold, n),
            seq_term(SeqKind::Paperfold, (n - 1) / 2)
        );
        assert_eq!(seq_term(SeqKind::Paperfold, u64::MAX), 1);
    }

    #[test]
    fn thue_morse_blocks() {
        for n in 0..(1u64 << 18) {
            let m = seq_term(SeqKind::ThueMorse, n);
            assert_eq!(seq_term(SeqKind::ThueMorse, 2 * n), m);
            assert_eq!(seq_term(SeqKind::ThueMorse, 2 * n + 1), -m);
        }
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(0), 0);
        assert_eq!(digit_sum(7), 3);
        for k in 0..=62 {
            assert_eq!(digit_sum(1 << k), 1);
        }
    }

    #[test]
    fn summatory_matches_direct_sums() {
        for kind in SeqKind::ALL {
            let mut s = 0i64;
            for n in 0..5000u64 {
                assert_eq!(summatory(kind, n).s, s, "{kind} n = {n}");
                s += seq_term(kind, n) as i64;
            }
        }
        assert_eq!(summatory(SeqKind::Paperfold, 1).s, 1);
        assert_eq!(summatory(SeqKind::Paperfold, 4).s, 2);
    }

    #[test]
    fn doubling_identity() {
        for n in 0..=100_000u64 {
            let d = summatory(SeqKind::Paperfold, 2 * n).s - summatory(SeqKind::Paperfold, n).s;
            assert_eq!(d, (n % 2) as i64);
        }
    }

    #[test]
    fn bound_reports() {
        let r = summatory_bound_report(1).unwrap();
        assert_eq!((r.max_ratio, r.worst_n, r.all_within), (1.0, 1, true));
        let r = summatory_bound_report(1 << 20).unwrap();
        assert!(r.all_within && r.max_ratio <= 1.0);
        assert!(summatory_bound_report(0).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in SeqKind::ALL {
            assert_eq!(kind.name().parse::<SeqKind>().unwrap(), kind);
        }
        assert!("fibonacci".parse::<SeqKind>().is_err());
    }

    proptest! {
        #[test]
        fn paperfold_recurrence_holds_everywhere(n in 0u64..(u64::MAX / 2)) {
            let e = |k| seq_term(SeqKind::Paperfold, k);
            prop_assert_eq!(e(2 * n + 1), e(n));
            prop_assert_eq!(e(2 * n), if n % 2 == 0 { 1 } else { -1 });
        }

        #[test]
        fn paperfold_sum_respects_log_bound(n in 1u64..u64::MAX) {
            prop_assert!(within_log_bound(&summatory(SeqKind::Paperfold, n)));
        }

        #[test]
        fn doubling_identity_large(n in 0u64..(u64::MAX / 2)) {
            let d = summatory(SeqKind::Paperfold, 2 * n).s - summatory(SeqKind::Paperfold, n).s;
            prop_assert_eq!(d, (n % 2) as i64);
        }
    }
}
