use thiserror::Error;

use super::{Equation, EquationKind, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Plus,
    Amp,
    Semi,
    LParen,
    RParen,
    Eq,
    Leq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "'0'".into(),
            Tok::One => "'1'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Semi => "';'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eq => "'='".into(),
            Tok::Leq => "'<='".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0' => Tok::Zero,
            b'1' => Tok::One,
            b'+' => Tok::Plus,
            b'&' => Tok::Amp,
            b';' => Tok::Semi,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((i, Tok::Leq));
                i += 2;
                continue;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character '{ch}'") });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // Each level collects its operands and hands them to the smart
    // constructor, so flattening happens here and not in a later pass.
    fn join(&mut self) -> Result<Term, ParseError> {
        let mut args = vec![self.meet()?];
        while self.eat(&Tok::Plus) {
            args.push(self.meet()?);
        }
        Ok(if args.len() == 1 { args.pop().unwrap() } else { Term::join(args) })
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut args = vec![self.comp()?];
        while self.eat(&Tok::Amp) {
            args.push(self.comp()?);
        }
        Ok(if args.len() == 1 { args.pop().unwrap() } else { Term::meet(args) })
    }

    fn comp(&mut self) -> Result<Term, ParseError> {
        let mut args = vec![self.atom()?];
        while self.eat(&Tok::Semi) {
            args.push(self.atom()?);
        }
        Ok(if args.len() == 1 { args.pop().unwrap() } else { Term::comp(args) })
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Zero => Ok(Term::Zero),
            Tok::One => Ok(Term::Ide),
            Tok::Ident(name) => Ok(Term::var(&name)),
            Tok::LParen => {
                let t = self.join()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                Ok(t)
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected a term, found {}", other.describe()))
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected {}", t.describe())),
        }
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(Parser { toks, pos: 0, end: text.len() })
}

/// Parses a term; `;` binds tighter than `&`, which binds tighter than `+`.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = parser(text)?;
    let t = p.join()?;
    p.finish()?;
    Ok(t)
}

/// Parses `term = term` or `term <= term`.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut p = parser(text)?;
    let lhs = p.join()?;
    let kind = if p.eat(&Tok::Eq) {
        EquationKind::Eq
    } else if p.eat(&Tok::Leq) {
        EquationKind::Leq
    } else {
        return p.err("expected '=' or '<='");
    };
    let rhs = p.join()?;
    p.finish()?;
    Ok(Equation { lhs, rhs, kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let one_and = parse("1 & x;y").unwrap();
        assert_eq!(
            one_and,
            Term::Meet(vec![Term::Ide, Term::Comp(vec![Term::var("x"), Term::var("y")])])
        );
        let j = parse("x + y & z").unwrap();
        assert_eq!(
            j,
            Term::Join(vec![Term::var("x"), Term::Meet(vec![Term::var("y"), Term::var("z")])])
        );
        assert_eq!(parse("0;x").unwrap(), Term::Zero);
    }

    #[test]
    fn render_examples() {
        assert_eq!(parse("1 & x;y").unwrap().to_string(), "1 & x;y");
        assert_eq!(Term::Zero.to_string(), "0");
        assert_eq!(parse("y + x").unwrap().to_string(), "x + y");
        assert_eq!(parse("(x + y);z").unwrap().to_string(), "(x + y);z");
        assert_eq!(parse("(x & y);(1 & z)").unwrap().to_string(), "(x & y);(1 & z)");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        match parse("x & ") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse("x ? y") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("(x;y").is_err());
        assert!(parse("x y").is_err());
        assert!(parse("X").is_err());
    }

    #[test]
    fn equations() {
        let e = parse_equation("1 & x;y <= x;(1 & y;x);y").unwrap();
        assert_eq!(e.kind, EquationKind::Leq);
        assert_eq!(e.rhs.to_string(), "x;(1 & y;x);y");
        assert!(parse_equation("x").is_err());
        assert!(parse_equation("x = y = z").is_err());
    }

    #[test]
    fn identifiers() {
        assert_eq!(parse("x_1").unwrap(), Term::var("x_1"));
        assert_eq!(parse("ab2;c").unwrap().to_string(), "ab2;c");
    }
}
