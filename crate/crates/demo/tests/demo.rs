use ecn::numeric::Rational;
use ecn_demo::{approximations, diagonal_intervals, specker};

fn rat(s: &str) -> Rational {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    Rational::new(n.parse::<i64>().unwrap(), d.parse::<i64>().unwrap())
}

fn rows(text: &str) -> Vec<Vec<&str>> {
    text.lines().map(|l| l.split('\t').collect()).collect()
}

#[test]
fn sqrt2_approximations_tighten() {
    let text = approximations("sqrt2", 12).unwrap();
    let rows = rows(&text);
    assert_eq!(rows.len(), 13);
    for (n, row) in rows.iter().enumerate() {
        assert_eq!(row[0], n.to_string());
        assert_eq!(rat(row[2]), Rational::pow2(-(n as i64)));
        let (lo, hi): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
        assert!(
            lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi,
            "row {n}: [{lo}, {hi}]"
        );
    }
    assert!(approximations("tau", 3).is_err());
}

#[test]
fn demo_specker_rows_show_digits() {
    let text = specker("demo", 4, 4).unwrap();
    let rows = rows(&text);
    assert_eq!(rows[2], ["3", "5/8", "101"]);
    assert_eq!(rows[3], ["4", "11/16", "1011"]);
    assert!(specker("elsewhere", 4, 4).is_err());
}

#[test]
fn diagonal_intervals_nest_and_avoid_each_enclosure() {
    let text = diagonal_intervals(6).unwrap();
    let mut prev = (Rational::zero(), Rational::one());
    for row in rows(&text) {
        let (lo, hi, e_lo, e_hi) = (rat(row[1]), rat(row[2]), rat(row[3]), rat(row[4]));
        assert!(prev.0 <= lo && hi <= prev.1);
        assert!(hi < e_lo || lo > e_hi, "stage {} meets its enclosure", row[0]);
        prev = (lo, hi);
    }
    assert!(diagonal_intervals(0).is_err());
}
