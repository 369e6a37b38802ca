//! Integer expressions used in the registry data file.

use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

pub type Env = HashMap<String, i64>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    const SYMS: [&str; 17] = ["&&", "||", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "/", "%", "(", ")", ",", "!"];
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[st..i].parse().map_err(|e| format!("{e}"))?));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[st..i].to_string()));
            continue;
        }
        for sym in SYMS {
            if s[i..].starts_with(sym) {
                out.push(Tok::Sym(sym));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(format!("unexpected character {c:?} in {s:?}"));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_sym(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some(Tok::Sym(s)) => Some(s),
            _ => None,
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.peek_sym() == Some(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn binary(&mut self, level: usize) -> Result<Expr, String> {
        const LEVELS: [&[(&str, Op)]; 5] = [
            &[("||", Op::Or)],
            &[("&&", Op::And)],
            &[("==", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)],
            &[("+", Op::Add), ("-", Op::Sub)],
            &[("*", Op::Mul), ("/", Op::Div), ("%", Op::Rem)],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        'more: loop {
            for &(sym, op) in LEVELS[level] {
                if self.eat(sym) {
                    let rhs = self.binary(level + 1)?;
                    lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
                    continue 'more;
                }
            }
            return Ok(lhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let e = self.binary(0)?;
            if !self.eat(")") {
                return Err("missing )".into());
            }
            return Ok(e);
        }
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat("(") {
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.binary(0)?);
                            if self.eat(")") {
                                break;
                            }
                            if !self.eat(",") {
                                return Err("expected , or )".into());
                            }
                        }
                    }
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr, String> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.binary(0)?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in {s:?}"));
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<i64, String> {
        Ok(match self {
            Expr::Num(n) => *n,
            Expr::Var(v) => *env.get(v).ok_or_else(|| format!("unbound variable {v}"))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Call(f, args) => {
                let vals: Result<Vec<i64>, String> = args.iter().map(|a| a.eval(env)).collect();
                let vals = vals?;
                match (f.as_str(), vals.as_slice()) {
                    ("min", [a, rest @ ..]) => rest.iter().fold(*a, |m, &x| m.min(x)),
                    ("max", [a, rest @ ..]) => rest.iter().fold(*a, |m, &x| m.max(x)),
                    _ => return Err(format!("unknown function {f}")),
                }
            }
            Expr::Bin(op, a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div | Op::Rem if y == 0 => return Err("division by zero".into()),
                    Op::Div => x.div_euclid(y),
                    Op::Rem => x.rem_euclid(y),
                    Op::Eq => (x == y) as i64,
                    Op::Ne => (x != y) as i64,
                    Op::Lt => (x < y) as i64,
                    Op::Le => (x <= y) as i64,
                    Op::Gt => (x > y) as i64,
                    Op::Ge => (x >= y) as i64,
                    Op::And => (x != 0 && y != 0) as i64,
                    Op::Or => (x != 0 || y != 0) as i64,
                }
            }
        })
    }

    pub fn holds(&self, env: &Env) -> Result<bool, String> {
        Ok(self.eval(env)? != 0)
    }
}

/// A fundamental-weight combination such as `w1+2*w[k-1]`, evaluated to
/// coefficients over `rank` nodes. Out-of-range indices contribute nothing.
pub fn eval_weight(spec: &str, env: &Env, rank: usize) -> Result<Vec<i64>, String> {
    let mut out = vec![0i64; rank];
    let spec = spec.trim();
    if spec == "0" || spec.is_empty() {
        return Ok(out);
    }
    for term in split_top_level(spec) {
        let term = term.trim();
        let (coef, atom) = match term.find('w') {
            Some(pos) => {
                let head = term[..pos].trim().trim_end_matches('*').trim();
                let c = if head.is_empty() { 1 } else { parse(head)?.eval(env)? };
                (c, &term[pos + 1..])
            }
            None => return Err(format!("bad weight term {term:?}")),
        };
        let idx = if let Some(inner) = atom.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| format!("bad weight term {term:?}"))?;
            parse(inner)?.eval(env)?
        } else {
            atom.parse::<i64>().map_err(|_| format!("bad weight term {term:?}"))?
        };
        if idx >= 1 && (idx as usize) <= rank {
            out[idx as usize - 1] += coef;
        }
    }
    Ok(out)
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut st = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[st..i]);
                st = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[st..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn arithmetic_and_logic() {
        let e = env(&[("n", 6), ("k", 2)]);
        assert_eq!(parse("n-1").unwrap().eval(&e), Ok(5));
        assert_eq!(parse("2*n+1").unwrap().eval(&e), Ok(13));
        assert_eq!(parse("min(n,k)").unwrap().eval(&e), Ok(2));
        assert_eq!(parse("(n-1)/2").unwrap().eval(&e), Ok(2));
        assert!(parse("n>=2 && 2*k<=n").unwrap().holds(&e).unwrap());
        assert!(!parse("n%2==1").unwrap().holds(&e).unwrap());
        assert!(parse("n+").is_err());
    }

    #[test]
    fn weights() {
        let e = env(&[("n", 4), ("k", 2)]);
        assert_eq!(eval_weight("w1+w3", &e, 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(eval_weight("2*w[k]", &e, 3).unwrap(), vec![0, 2, 0]);
        assert_eq!(eval_weight("w[n]", &e, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(eval_weight("0", &e, 3).unwrap(), vec![0, 0, 0]);
    }
}
