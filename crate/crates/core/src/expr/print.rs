use std::fmt::Write;

use num_traits::{One, Signed};

use crate::ring::{Poly, SymbolOrder, Word};

/// Prints with base symbols in name order.
pub fn print_poly(p: &Poly) -> String {
    print_poly_with(p, &SymbolOrder::default())
}

/// Prints `p` in the surface syntax accepted by [`parse_poly`](super::parse_poly),
/// highest-degree terms first under `order`.
pub fn print_poly_with(p: &Poly, order: &SymbolOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (word, coeff)) in p.sorted_terms(order).into_iter().enumerate() {
        let magnitude = coeff.abs();
        match (i, coeff.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if word.is_unit() {
            write!(out, "{magnitude}").unwrap();
        } else {
            if !magnitude.is_one() {
                write!(out, "{magnitude}*").unwrap();
            }
            write_word(&mut out, word);
        }
    }
    out
}

fn write_word(out: &mut String, word: &Word) {
    let syms = word.symbols();
    let mut i = 0;
    let mut first = true;
    while i < syms.len() {
        let mut run = 1;
        while i + run < syms.len() && syms[i + run] == syms[i] {
            run += 1;
        }
        if !first {
            out.push('*');
        }
        first = false;
        write!(out, "{}", syms[i]).unwrap();
        if run > 1 {
            write!(out, "^{run}").unwrap();
        }
        i += run;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::ring::Symbol;

    #[test]
    fn print_examples() {
        let xy = ["x", "y"];
        assert_eq!(print_poly(&Poly::zero()), "0");
        let c = parse_poly("x*y - y*x", &xy).unwrap();
        assert_eq!(print_poly(&c), "x*y - y*x");
        assert_eq!(print_poly(&parse_poly("x - x^3", &xy).unwrap()), "-x^3 + x");
        assert_eq!(print_poly(&parse_poly("3 - 2*x*x*y", &xy).unwrap()), "-2*x^2*y + 3");
        assert_eq!(print_poly(&parse_poly("-1", &xy).unwrap()), "-1");
    }

    #[test]
    fn declared_order_controls_layout() {
        let p = parse_poly("x*y - y*x", &["x", "y"]).unwrap();
        assert_eq!(print_poly_with(&p, &SymbolOrder::new(&["y", "x"])), "-y*x + x*y");
    }

    #[test]
    fn schematic_symbols_print_with_uid() {
        let t = Symbol::schematic("t", 3).unwrap();
        let x = Poly::var(Symbol::base("x").unwrap());
        let p = Poly::product([&x, &Poly::var(t), &x]);
        assert_eq!(print_poly(&p), "x*t#3*x");
        assert_eq!(parse_poly(&print_poly(&p), &["x"]).unwrap(), p);
    }
}
