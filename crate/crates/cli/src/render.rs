use costshare::{PlayerId, Players, Rational};
use num_traits::ToPrimitive;

pub fn value(v: &Rational, decimal: Option<usize>) -> String {
    match decimal {
        None => v.to_string(),
        Some(places) => format!("{v} (~{:.*})", places, v.to_f64().unwrap_or(f64::NAN)),
    }
}

pub fn shares<'a>(
    players: &Players,
    shares: impl Iterator<Item = (PlayerId, &'a Rational)>,
    decimal: Option<usize>,
) -> String {
    shares
        .map(|(p, v)| format!("{}={}", players.name(p), value(v, decimal)))
        .collect::<Vec<_>>()
        .join(" ")
}
