//! Published reference values, transcribed verbatim.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::perm::Permutation;

/// Smith normal form diagonals of `D̃(n,k)` in exponent notation.
pub const F_TABLE: &[(usize, usize, &str)] = &[
    (4, 1, "(1^2,5)"),
    (4, 2, "(1^2,3^2,6)"),
    (5, 1, "(1^3,9)"),
    (5, 2, "(1^5,7^3,28)"),
    (5, 3, "(1^6,5^6,15^2,105)"),
    (5, 4, "(1^8,3^4,6^4,30^4)"),
    (6, 1, "(1^4,14)"),
    (6, 2, "(1^9,6,12^3,156)"),
    (6, 3, "(1^15,5^4,10^5,110^4,220)"),
    (6, 4, "(1^20,2,4^9,8^5,24^5,72^4,360^4,3960)"),
    (6, 5, "(1^31,3^6,6^5,42^19,84,168^4,504^5)"),
    (6, 6, "(1^28,2^18,10^2,20^28,140^10,280^3,840)"),
    (6, 7, "(1^52,2^18,6^10,12^6,60^11,420^3,840)"),
    (7, 1, "(1^5,20)"),
    (7, 2, "(1^14,9,18^4,342)"),
    (7, 3, "(1^29,8^5,16^9,272^5,816)"),
    (7, 4, "(1^49,7^14,14^15,70^6,210^8,420,1680^4,28560)"),
    (7, 5, "(1^76,2^9,6^20,12^15,156^29,1092^15,5460^4,21840)"),
    (8, 1, "(1^6,27)"),
    (8, 2, "(1^20,25^6,325)"),
    (8, 3, "(1^49,23^20,92,276^5,6900)"),
    (8, 4, "(1^98,7^6,21^43,231^20,5313^6,10626)"),
    (9, 1, "(1^7,35)"),
    (9, 2, "(1^27,33^7,561)"),
    (9, 3, "(1^76,31^27,496^7,5456)"),
    (10, 1, "(1^8,44)"),
    (10, 2, "(1^35,21,42^7,1806)"),
];

/// `(n, k, [(prime, exponent)])`.
pub type FactoredEntry = (usize, usize, &'static [(u32, u32)]);

/// `|det E(n,k)|` as prime factorizations.
pub const E_TABLE: &[FactoredEntry] = &[
    (4, 1, &[(2, 7), (3, 1), (5, 2), (19, 1)]),
    (4, 2, &[(2, 6), (3, 1), (29, 1)]),
    (5, 1, &[(2, 22), (3, 6), (5, 5), (7, 4), (59, 1), (89, 1)]),
];

/// `u(n) = max ν_w` with every maximizer.
pub const U_TABLE: &[(usize, u64, &[&str])] = &[
    (3, 2, &["132"]),
    (4, 5, &["1432"]),
    (5, 14, &["12543", "15432", "21543"]),
    (6, 84, &["126543", "216543"]),
    (7, 660, &["1327654"]),
    (8, 9438, &["13287654"]),
    (9, 163592, &["132987654"]),
    (10, 4424420, &["1,4,3,2,10,9,8,7,6,5"]),
];

pub fn f_entry(n: usize, k: usize) -> Option<&'static str> {
    F_TABLE
        .iter()
        .find(|(a, b, _)| *a == n && *b == k)
        .map(|(_, _, s)| *s)
}

pub fn e_entry(n: usize, k: usize) -> Option<&'static [(u32, u32)]> {
    E_TABLE
        .iter()
        .find(|(a, b, _)| *a == n && *b == k)
        .map(|(_, _, f)| *f)
}

pub fn u_entry(n: usize) -> Option<(u64, Vec<Permutation>)> {
    U_TABLE.iter().find(|(a, _, _)| *a == n).map(|(_, u, ws)| {
        let perms = ws
            .iter()
            .map(|w| w.parse().expect("valid table permutation"))
            .collect();
        (*u, perms)
    })
}

pub fn factored_value(factors: &[(u32, u32)]) -> BigUint {
    factors
        .iter()
        .map(|&(p, e)| BigUint::from(p).pow(e))
        .product()
}

/// `2^7*3*5^2*19` style rendering.
pub fn factored_string(factors: &[(u32, u32)]) -> String {
    factors
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// One line per table entry; the pinned checksum in the tests is taken over
/// this text.
pub fn canonical_text() -> String {
    let mut out = String::new();
    for (n, k, s) in F_TABLE {
        writeln!(out, "f {n} {k} {s}").expect("string write");
    }
    for (n, k, f) in E_TABLE {
        writeln!(out, "e {n} {k} {}", factored_string(f)).expect("string write");
    }
    for (n, u, ws) in U_TABLE {
        writeln!(out, "u {n} {u} {}", ws.join(" ")).expect("string write");
    }
    out
}
