//! A minimal s-expression reader with source positions.

use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// `(head ...)` with an atom head.
    pub fn head(&self) -> Option<(&str, &[Sexp])> {
        let items = self.list()?;
        let (first, rest) = items.split_first()?;
        Some((first.atom()?, rest))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(items, _) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> SyntaxError {
        SyntaxError { pos, msg: msg.into() }
    }
}

/// Read every top-level form. `;` starts a comment running to end of line.
pub fn parse(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let mut atom: Option<(String, Pos)> = None;

    fn flush(atom: &mut Option<(String, Pos)>, stack: &mut [(Vec<Sexp>, Pos)], top: &mut Vec<Sexp>) {
        if let Some((s, p)) = atom.take() {
            let item = Sexp::Atom(s, p);
            match stack.last_mut() {
                Some((items, _)) => items.push(item),
                None => top.push(item),
            }
        }
    }

    while let Some(c) = chars.next() {
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        match c {
            ';' => {
                flush(&mut atom, &mut stack, &mut top);
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                flush(&mut atom, &mut stack, &mut top);
                stack.push((Vec::new(), pos));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut top);
                let (items, open) = stack
                    .pop()
                    .ok_or_else(|| SyntaxError::new(pos, "unmatched `)`"))?;
                let item = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((items, _)) => items.push(item),
                    None => top.push(item),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack, &mut top),
            c => match &mut atom {
                Some((s, _)) => s.push(c),
                None => atom = Some((c.to_string(), pos)),
            },
        }
    }
    flush(&mut atom, &mut stack, &mut top);
    if let Some((_, open)) = stack.pop() {
        return Err(SyntaxError::new(open, "unclosed `(`"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let forms = parse("(per R\n  (carrier 0 1)) ; note\nx").unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].to_string(), "(per R (carrier 0 1))");
        let inner = &forms[0].list().unwrap()[2];
        assert_eq!(inner.pos(), Pos { line: 2, col: 3 });
        assert_eq!(forms[1].pos(), Pos { line: 3, col: 1 });
    }

    #[test]
    fn unbalanced_input_is_located() {
        assert_eq!(parse("(a (b)").unwrap_err().pos, Pos { line: 1, col: 1 });
        assert_eq!(parse("a)").unwrap_err().pos, Pos { line: 1, col: 2 });
    }
}
