//! Element expressions: whitespace-separated factors multiplied left to right.
//!
//! ```text
//! word    := factor (ws factor)* | "e"
//! factor  := atom ('^' exponent)?
//! atom    := name | json-object
//! exponent:= '-'? digits | '(' ring-expression ')'
//! ```
//! `u^(x^2+1)` and `a^(x1 - 1)` take ring-valued exponents; `{…}` is a matrix
//! literal for the Borel and affine families.

use crate::engine::SelfSimilar;
use crate::error::{Error, Result};
use crate::instances::{power, ElementSyntax};

/// Parses an expression into an element of `inst`.
pub fn parse_element<I: ElementSyntax + ?Sized>(inst: &I, text: &str) -> Result<I::Elem> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut acc = inst.identity();
    let mut factors = 0;
    loop {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos == chars.len() {
            break;
        }
        let factor = parse_factor(inst, &chars, &mut pos)?;
        acc = inst.mul(&acc, &factor);
        factors += 1;
        if pos < chars.len() && !chars[pos].is_whitespace() {
            return Err(Error::Parse(format!("expected whitespace at offset {pos} in {text:?}")));
        }
    }
    if factors == 0 {
        return Err(Error::Parse("empty element expression".into()));
    }
    Ok(acc)
}

/// Canonical text form; parses back to an equal element.
pub fn render_element<I: SelfSimilar + ?Sized>(inst: &I, g: &I::Elem) -> String {
    inst.render(g)
}

fn parse_factor<I: ElementSyntax + ?Sized>(inst: &I, chars: &[char], pos: &mut usize) -> Result<I::Elem> {
    let start = *pos;
    if chars[start] == '{' {
        let body = balanced(chars, pos, '{', '}')?;
        let json: serde_json::Value =
            serde_json::from_str(&format!("{{{body}}}")).map_err(|e| Error::Parse(format!("element literal: {e}")))?;
        let base = inst.literal(&json)?;
        return integer_exponent(inst, chars, pos, base);
    }
    while *pos < chars.len() && (chars[*pos].is_ascii_alphanumeric() || chars[*pos] == '_') {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    if name.is_empty() {
        return Err(Error::Parse(format!("unexpected {:?} at offset {start}", chars[start])));
    }
    if chars.get(*pos) == Some(&'^') && chars.get(*pos + 1) == Some(&'(') {
        *pos += 1;
        let expr = balanced(chars, pos, '(', ')')?;
        return inst.ring_power(&name, &expr);
    }
    let base = match inst.named(&name) {
        Some(g) => g,
        None if name == "e" => inst.identity(),
        None => return Err(Error::Parse(format!("unknown generator {name:?}"))),
    };
    integer_exponent(inst, chars, pos, base)
}

fn integer_exponent<I: SelfSimilar + ?Sized>(
    inst: &I,
    chars: &[char],
    pos: &mut usize,
    base: I::Elem,
) -> Result<I::Elem> {
    if chars.get(*pos) != Some(&'^') {
        return Ok(base);
    }
    *pos += 1;
    let start = *pos;
    if chars.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let text: String = chars[start..*pos].iter().collect();
    let k: i64 = text
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent {text:?} at offset {start}")))?;
    Ok(power(inst, &base, k))
}

/// Consumes a balanced `open … close` group starting at `pos`; returns the inside.
fn balanced(chars: &[char], pos: &mut usize, open: char, close: char) -> Result<String> {
    debug_assert_eq!(chars[*pos], open);
    let start = *pos + 1;
    let mut depth = 0usize;
    while *pos < chars.len() {
        let c = chars[*pos];
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                *pos += 1;
                return Ok(chars[start..*pos - 1].iter().collect());
            }
        }
        *pos += 1;
    }
    Err(Error::Parse(format!("unbalanced {open:?} at offset {}", start - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::LampInstance;

    #[test]
    fn words_multiply_left_to_right() {
        let inst = LampInstance::new(2, &[vec![0, 1]]).unwrap();
        let g = parse_element(&inst, "u x0^-1 u^2").unwrap();
        let want = inst.mul(&inst.mul(&inst.u(), &inst.x_pow(0, -1)), &power(&inst, &inst.u(), 2));
        assert_eq!(g, want);
        assert_eq!(parse_element(&inst, "e").unwrap(), inst.identity());
    }

    #[test]
    fn ring_exponents_and_errors() {
        let inst = LampInstance::new(2, &[vec![0, 1]]).unwrap();
        let g = parse_element(&inst, "u^((x^2+1)/x) x0").unwrap();
        assert_eq!(parse_element(&inst, &render_element(&inst, &g)).unwrap(), g);
        assert!(parse_element(&inst, "").is_err());
        assert!(parse_element(&inst, "w").is_err());
        assert!(parse_element(&inst, "u^(x").is_err());
        assert!(parse_element(&inst, "u^x").is_err());
    }
}
