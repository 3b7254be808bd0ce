use crate::blackbox::BlackBoxFunc;
use crate::error::Result;
use crate::exactfield::Rational;

/// `Δ_h f(x) = f(x + h) − f(x)`.
pub fn difference(h: &Rational, f: &BlackBoxFunc) -> BlackBoxFunc {
    let (h, f) = (h.clone(), f.clone());
    BlackBoxFunc::new(move |x| Ok(f.eval(&(x + &h))? - f.eval(x)?))
}

/// `Δ_{h_1 … h_n} f = Δ_{h_1}(⋯ Δ_{h_n} f)`; the empty chain is `f`.
pub fn difference_chain(hs: &[Rational], f: &BlackBoxFunc) -> BlackBoxFunc {
    hs.iter()
        .rev()
        .fold(f.clone(), |acc, h| difference(h, &acc))
}

/// `Δ_h^n f`.
pub fn difference_power(h: &Rational, n: usize, f: &BlackBoxFunc) -> BlackBoxFunc {
    difference_chain(&vec![h.clone(); n], f)
}

/// Evaluates `Δ_{y_1 … y_k} f(x)` directly, by
/// `Δ_{y_1 … y_k} f(x) = Δ_{y_2 … y_k} f(x + y_1) − Δ_{y_2 … y_k} f(x)`.
///
/// This is the `2^k`-term signed sum over subsets of the spans, without
/// building intermediate closures.
pub fn nested_difference(f: &BlackBoxFunc, ys: &[Rational], x: &Rational) -> Result<Rational> {
    match ys.split_first() {
        None => f.eval(x),
        Some((y, rest)) => {
            Ok(nested_difference(f, rest, &(x + y))? - nested_difference(f, rest, x)?)
        }
    }
}
