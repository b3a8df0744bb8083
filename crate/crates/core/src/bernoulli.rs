//! Exact Bernoulli numbers `B₂, B₄, …, B₆₀` as rational constants.
//!
//! The table is stored as decimal numerator/denominator strings because the
//! later numerators exceed 128 bits (B₆₀'s numerator has 43 digits), parsed
//! once into `f64` quotients on first use. Keeping the source exact avoids
//! any runtime recurrence error; the only rounding is the single final
//! division per entry.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// `(numerator, denominator)` of `B_{2j}` for `j = 1ꓸꓸ30`.
const TABLE: [(&str, &str); 30] = [
    ("1", "6"),
    ("-1", "30"),
    ("1", "42"),
    ("-1", "30"),
    ("5", "66"),
    ("-691", "2730"),
    ("7", "6"),
    ("-3617", "510"),
    ("43867", "798"),
    ("-174611", "330"),
    ("854513", "138"),
    ("-236364091", "2730"),
    ("8553103", "6"),
    ("-23749461029", "870"),
    ("8615841276005", "14322"),
    ("-7709321041217", "510"),
    ("2577687858367", "6"),
    ("-26315271553053477373", "1919190"),
    ("2929993913841559", "6"),
    ("-261082718496449122051", "13530"),
    ("1520097643918070802691", "1806"),
    ("-27833269579301024235023", "690"),
    ("596451111593912163277961", "282"),
    ("-5609403368997817686249127547", "46410"),
    ("495057205241079648212477525", "66"),
    ("-801165718135489957347924991853", "1590"),
    ("29149963634884862421418123812691", "798"),
    ("-2479392929313226753685415739663229", "870"),
    ("84483613348880041862046775994036021", "354"),
    ("-1215233140483755572040304994079820246041491", "56786730"),
];

/// Returns `B_{2j}` as `f64` for `1 ≤ j ≤ 30`.
///
/// # Panics
/// If `j` is outside the table.
pub(crate) fn b2(j: usize) -> f64 {
    static CACHE: OnceLock<[f64; 30]> = OnceLock::new();
    let values = CACHE.get_or_init(|| {
        let mut out = [0.0; 30];
        for (slot, (num, den)) in out.iter_mut().zip(TABLE) {
            let num: BigInt = num.parse().expect("table numerators are valid integers");
            let den: BigInt = den.parse().expect("table denominators are valid integers");
            // Both convert exactly wherever f64 can represent them; the
            // quotient is correct to within one rounding for the giant tail
            // entries, which is all the asymptotic series can use anyway.
            *slot = num.to_f64().expect("finite") / den.to_f64().expect("finite");
        }
        out
    });
    values[j - 1]
}
