use num_bigint::BigInt;

use super::{DataFile, GapError, Value};
use crate::perm::Perm;

/// Parses a data file. Accepts `:=` or `=`, optional semicolons, `#`
/// comments and backslash-newline continuations (also inside integers).
pub fn parse(file: &str, text: &str) -> Result<DataFile, GapError> {
    let mut p = Parser { file, src: text.as_bytes(), pos: 0 };
    let mut out = DataFile::new(file);
    loop {
        p.skip();
        if p.eof() {
            return Ok(out);
        }
        let at = p.pos;
        let name = p.ident()?;
        p.skip();
        if !(p.eat(b":=") || p.eat(b"=")) {
            return Err(p.error("expected `:=`"));
        }
        let value = p.value()?;
        p.skip();
        p.eat(b";");
        if out.entries.insert(name.clone(), value).is_some() {
            return Err(p.error_at(at, format!("`{name}` is assigned twice")));
        }
    }
}

struct Parser<'a> {
    file: &'a str,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn eof(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> GapError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> GapError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = before.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let column = String::from_utf8_lossy(&before[line_start..]).chars().count() + 1;
        GapError::Syntax { file: self.file.to_string(), line, column, message: message.into() }
    }

    fn continuation(&self) -> usize {
        match &self.src[self.pos..] {
            [b'\\', b'\n', ..] => 2,
            [b'\\', b'\r', b'\n', ..] => 3,
            _ => 0,
        }
    }

    fn skip(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.pos += 1;
                    }
                }
                Some(b'\\') if self.continuation() > 0 => self.pos += self.continuation(),
                _ => return,
            }
        }
    }

    fn eat(&mut self, token: &[u8]) -> bool {
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), GapError> {
        self.skip();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", b as char)))
        }
    }

    fn ident(&mut self) -> Result<String, GapError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            return Err(self.error_at(start, "expected a variable name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<BigInt, GapError> {
        self.skip();
        let start = self.pos;
        let mut digits = String::new();
        if self.peek() == Some(b'-') {
            digits.push('-');
            self.pos += 1;
        }
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    digits.push(b as char);
                    self.pos += 1;
                }
                Some(b'\\') if self.continuation() > 0 => self.pos += self.continuation(),
                _ => break,
            }
        }
        digits.parse().map_err(|_| self.error_at(start, "expected an integer"))
    }

    fn value(&mut self) -> Result<Value, GapError> {
        self.skip();
        match self.peek() {
            Some(b'[') => self.list(),
            Some(b'(') => self.perm(),
            Some(b) if b == b'-' || b.is_ascii_digit() => Ok(Value::Int(self.integer()?)),
            Some(_) => Err(self.error("expected a value")),
            None => Err(self.error("unexpected end of file")),
        }
    }

    fn list(&mut self) -> Result<Value, GapError> {
        self.expect(b'[')?;
        let mut items = Vec::new();
        self.skip();
        if self.eat(b"]") {
            return Ok(Value::List(items));
        }
        loop {
            items.push(self.value()?);
            self.skip();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                _ => return Err(self.error("expected `,` or `]`")),
            }
        }
    }

    /// A product of disjoint cycles, or `()`.
    fn perm(&mut self) -> Result<Value, GapError> {
        let start = self.pos;
        let mut cycles: Vec<Vec<u64>> = Vec::new();
        let mut identity = false;
        loop {
            self.skip();
            if self.peek() != Some(b'(') {
                break;
            }
            self.pos += 1;
            self.skip();
            if self.eat(b")") {
                identity = true;
                continue;
            }
            let mut cycle = Vec::new();
            loop {
                let at = self.pos;
                let v = self.integer()?;
                let v: u64 = v.try_into().map_err(|_| self.error_at(at, "permutation points are positive"))?;
                cycle.push(v);
                self.skip();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
            cycles.push(cycle);
        }
        if identity && !cycles.is_empty() {
            return Err(self.error_at(start, "`()` mixed with cycles"));
        }
        Perm::from_cycles(&cycles).map(Value::Perm).map_err(|e| self.error_at(start, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> (usize, usize) {
        match parse("f", text) {
            Err(GapError::Syntax { line, column, .. }) => (line, column),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn integers_and_lists() {
        let f = parse("f", "x := [1,2,3];").unwrap();
        assert_eq!(f.get("x").unwrap(), &Value::int_list([1, 2, 3]));
        let f = parse("f", "# header\ny = [ [ -4 , [] ],\n 12345678901234567890123 ] z:=7").unwrap();
        assert_eq!(f.entries.len(), 2);
        let big: BigInt = "12345678901234567890123".parse().unwrap();
        assert_eq!(f.get("y").unwrap().as_list("y").unwrap()[1], Value::Int(big));
        assert_eq!(f.get("z").unwrap(), &Value::int(7));
    }

    #[test]
    fn continuation_lines() {
        let f = parse("f", "n := 123\\\n456;\nl := [1,\\\n2];").unwrap();
        assert_eq!(f.get("n").unwrap(), &Value::int(123456));
        assert_eq!(f.get("l").unwrap(), &Value::int_list([1, 2]));
    }

    #[test]
    fn permutations() {
        let f = parse("f", "p := [ (1,2)(3,5,4), (), ( 7 , 8 )\n(9,10) ];").unwrap();
        let ps = f.get("p").unwrap().as_perm_list("p").unwrap();
        assert_eq!(ps[0].to_string(), "(1,2)(3,5,4)");
        assert!(ps[1].is_identity());
        assert_eq!(ps[2].to_string(), "(7,8)(9,10)");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(err("x := [1,2"), (1, 10));
        assert_eq!(err("x := 1;\ny := [1;]"), (2, 8));
        assert_eq!(err("x := (1,2)(2,3);"), (1, 6));
        assert_eq!(err("x := (0,1);"), (1, 6));
        assert_eq!(err("1x := 2;"), (1, 1));
        assert_eq!(err("x := 1; x := 2;"), (1, 9));
        assert_eq!(err("x 1"), (1, 3));
    }
}
