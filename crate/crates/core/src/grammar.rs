//! Concrete syntax for terms, types and judgments.
//!
//! ```text
//! term   := abs | mu | appseq
//! abs    := ("\" | "λ") var "." term
//! mu     := ("mu" | "μ") name "." "[" name "]" term
//! appseq := atom { atom } [ abs | mu ]
//! atom   := var | "(" term ")"
//!
//! type   := operand [ "->" type ]
//! operand:= tatom { "/\" tatom } | tatom { "\/" tatom }
//! tatom  := TypeVar | "top" | "bot" | "(" type ")"
//!
//! judgment := [ var ":" type { "," var ":" type } ] "|-" term ":" type
//!             [ "|" [ name ":" type { "," name ":" type } ] ]
//! ```
//!
//! `λ μ → ∩ ∪ ⊤ ⊥ ⊢` are accepted as synonyms of their ASCII spellings.
//! Term variables are lowercase identifiers; type variables are capitalized.
//! Names appear only after `mu` and inside brackets, where any lowercase or
//! Greek identifier is read as a name; a leading `'` marks a name explicitly
//! (`'b`). Greek transliterations such as `alpha` are reserved for names.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Name, Term, Var};
use crate::typelang::{well_formed, Language, LeftEnv, RightEnv, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at {}..{}: expected {}, found {found}", span.start, span.end, expected.join(" or "))]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("type `{ty}` is not a {language} type")]
    LanguageViolation { ty: String, language: Language },
}

const RESERVED: &[&str] = &[
    "mu", "top", "bot", "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "nu", "xi", "omicron", "pi", "rho", "sigma", "tau", "upsilon",
    "phi", "chi", "psi", "omega",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Mu,
    Dot,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Colon,
    Comma,
    Turnstile,
    Bar,
    Arrow,
    InterOp,
    UnionOp,
    Top,
    Bot,
    Lower(String),
    Upper(String),
    Greek(String),
    Quoted(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Mu => f.write_str("`mu`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::InterOp => f.write_str("`/\\`"),
            Tok::UnionOp => f.write_str("`\\/`"),
            Tok::Top => f.write_str("`top`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::Lower(s) | Tok::Upper(s) | Tok::Greek(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "`'{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let offset = |i: usize| chars.get(i).map_or(text.len(), |c| c.0);
    while i < chars.len() {
        let (start, c) = chars[i];
        let next = chars.get(i + 1).map(|c| c.1);
        let single = |tok: Tok, len: usize, out: &mut Vec<_>| {
            out.push((tok, SourceSpan { start, end: offset(i + len) }));
            len
        };
        let consumed = match c {
            c if c.is_whitespace() => 1,
            '\\' if next == Some('/') => single(Tok::UnionOp, 2, &mut out),
            '\\' | 'λ' => single(Tok::Lambda, 1, &mut out),
            '/' if next == Some('\\') => single(Tok::InterOp, 2, &mut out),
            '-' if next == Some('>') => single(Tok::Arrow, 2, &mut out),
            '|' if next == Some('-') => single(Tok::Turnstile, 2, &mut out),
            '|' => single(Tok::Bar, 1, &mut out),
            '⊢' => single(Tok::Turnstile, 1, &mut out),
            '→' => single(Tok::Arrow, 1, &mut out),
            '∩' => single(Tok::InterOp, 1, &mut out),
            '∪' => single(Tok::UnionOp, 1, &mut out),
            '⊤' => single(Tok::Top, 1, &mut out),
            '⊥' => single(Tok::Bot, 1, &mut out),
            'μ' => single(Tok::Mu, 1, &mut out),
            '.' => single(Tok::Dot, 1, &mut out),
            '[' => single(Tok::LBrack, 1, &mut out),
            ']' => single(Tok::RBrack, 1, &mut out),
            '(' => single(Tok::LParen, 1, &mut out),
            ')' => single(Tok::RParen, 1, &mut out),
            ':' => single(Tok::Colon, 1, &mut out),
            ',' => single(Tok::Comma, 1, &mut out),
            c if c.is_alphabetic() || c == '\'' => {
                let quoted = c == '\'';
                let mut j = if quoted { i + 1 } else { i };
                let first = chars.get(j).map(|c| c.1);
                if !first.is_some_and(char::is_alphabetic) {
                    return Err(ParseError {
                        span: SourceSpan { start, end: offset(i + 1) },
                        expected: vec!["identifier".into()],
                        found: format!("`{c}`"),
                    });
                }
                let ident_start = j;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                while j < chars.len() && chars[j].1 == '\'' {
                    j += 1;
                }
                let word: String = chars[ident_start..j].iter().map(|c| c.1).collect();
                let first = first.unwrap();
                let tok = if quoted {
                    Tok::Quoted(word)
                } else {
                    match word.as_str() {
                        "mu" => Tok::Mu,
                        "top" => Tok::Top,
                        "bot" => Tok::Bot,
                        _ if first.is_ascii_lowercase() => Tok::Lower(word),
                        _ if first.is_ascii_uppercase() => Tok::Upper(word),
                        _ if first.is_lowercase() => Tok::Greek(word),
                        _ => Tok::Upper(word),
                    }
                };
                out.push((tok, SourceSpan { start, end: offset(j) }));
                j - i
            }
            other => {
                return Err(ParseError {
                    span: SourceSpan { start, end: offset(i + 1) },
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        i += consumed;
    }
    out.push((Tok::Eof, SourceSpan { start: text.len(), end: text.len() }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Parser> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let (tok, span) = &self.toks[self.pos];
        Err(ParseError {
            span: *span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    fn var(&mut self) -> PResult<Var> {
        match self.peek() {
            Tok::Lower(s) if !RESERVED.contains(&s.as_str()) => {
                let v = Var::new(s.clone());
                self.bump();
                Ok(v)
            }
            _ => self.error(&["term variable"]),
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek() {
            Tok::Lower(s) | Tok::Greek(s) | Tok::Quoted(s) => {
                let n = Name::new(s.clone());
                self.bump();
                Ok(n)
            }
            _ => self.error(&["name"]),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Lambda | Tok::Mu => self.binder(),
            _ => self.appseq(),
        }
    }

    fn binder(&mut self) -> PResult<Term> {
        if self.bump() == Tok::Lambda {
            let x = self.var()?;
            self.expect(Tok::Dot)?;
            Ok(Term::Abs(x, Box::new(self.term()?)))
        } else {
            let alpha = self.name()?;
            self.expect(Tok::Dot)?;
            self.expect(Tok::LBrack)?;
            let beta = self.name()?;
            self.expect(Tok::RBrack)?;
            Ok(Term::Mu(alpha, beta, Box::new(self.term()?)))
        }
    }

    fn appseq(&mut self) -> PResult<Term> {
        let mut head = self.atom()?;
        loop {
            match self.peek() {
                Tok::Lower(_) | Tok::LParen => {
                    let arg = self.atom()?;
                    head = Term::app(head, arg);
                }
                Tok::Lambda | Tok::Mu => {
                    let arg = self.binder()?;
                    return Ok(Term::app(head, arg));
                }
                _ => return Ok(head),
            }
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lower(_) => Ok(Term::Var(self.var()?)),
            _ => self.error(&["term variable", "`(`", "`\\`", "`mu`"]),
        }
    }

    fn ty(&mut self) -> PResult<Type> {
        let left = self.operand()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Type::arrow(left, self.ty()?))
        } else {
            Ok(left)
        }
    }

    fn operand(&mut self) -> PResult<Type> {
        let first = self.tatom()?;
        let op = self.peek().clone();
        if op != Tok::InterOp && op != Tok::UnionOp {
            return Ok(first);
        }
        let mut parts = vec![first];
        while *self.peek() == op {
            self.bump();
            parts.push(self.tatom()?);
        }
        if matches!(self.peek(), Tok::InterOp | Tok::UnionOp) {
            // mixing /\ and \/ without parentheses is ambiguous
            return self.error(&[&op.to_string(), "`->`", "parentheses around the mixed operand"]);
        }
        Ok(if op == Tok::InterOp { Type::Inter(parts) } else { Type::Union(parts) })
    }

    fn tatom(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::Upper(s) => {
                self.bump();
                Ok(Type::Var(s))
            }
            Tok::Top => {
                self.bump();
                Ok(Type::top())
            }
            Tok::Bot => {
                self.bump();
                Ok(Type::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.error(&["type variable", "`top`", "`bot`", "`(`"]),
        }
    }

    fn left_env(&mut self) -> PResult<LeftEnv> {
        let mut env = LeftEnv::new();
        if *self.peek() == Tok::Turnstile {
            return Ok(env);
        }
        loop {
            let x = self.var()?;
            self.expect(Tok::Colon)?;
            env.insert(x, self.ty()?);
            if *self.peek() != Tok::Comma {
                return Ok(env);
            }
            self.bump();
        }
    }

    fn right_env(&mut self) -> PResult<RightEnv> {
        let mut env = RightEnv::new();
        if *self.peek() == Tok::Eof {
            return Ok(env);
        }
        loop {
            let a = self.name()?;
            self.expect(Tok::Colon)?;
            env.insert(a, self.ty()?);
            if *self.peek() != Tok::Comma {
                return Ok(env);
            }
            self.bump();
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a type without a language check.
pub fn parse_type_any(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_type(text: &str, language: Language) -> Result<Type, GrammarError> {
    let ty = parse_type_any(text)?;
    if well_formed(&ty, language) {
        Ok(ty)
    } else {
        Err(GrammarError::LanguageViolation { ty: print_type(&ty), language })
    }
}

/// A parsed `Γ |- M : A | Δ`, before any language check.
#[derive(Clone, Debug, PartialEq)]
pub struct RawJudgment {
    pub gamma: LeftEnv,
    pub term: Term,
    pub ty: Type,
    pub delta: RightEnv,
}

pub fn parse_judgment(text: &str) -> Result<RawJudgment, ParseError> {
    let mut p = Parser::new(text)?;
    let gamma = p.left_env()?;
    p.expect(Tok::Turnstile)?;
    let term = p.term()?;
    p.expect(Tok::Colon)?;
    let ty = p.ty()?;
    let delta = if *p.peek() == Tok::Bar {
        p.bump();
        p.right_env()?
    } else {
        RightEnv::new()
    };
    p.expect_eof()?;
    Ok(RawJudgment { gamma, term, ty, delta })
}

/// Parses either a judgment (if the text contains a turnstile) or a bare term.
pub fn looks_like_judgment(text: &str) -> bool {
    text.contains("|-") || text.contains('⊢')
}

pub fn print_term(term: &Term) -> String {
    let mut out = String::new();
    write_term(term, &mut out);
    out
}

fn write_term(term: &Term, out: &mut String) {
    match term {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Abs(x, body) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push('.');
            write_term(body, out);
        }
        Term::Mu(alpha, beta, body) => {
            out.push_str("mu ");
            out.push_str(alpha.as_str());
            out.push_str(".[");
            out.push_str(beta.as_str());
            out.push_str("] ");
            write_term(body, out);
        }
        Term::App(fun, arg) => {
            match **fun {
                Term::Abs(..) | Term::Mu(..) => paren(fun, out),
                _ => write_term(fun, out),
            }
            out.push(' ');
            match **arg {
                Term::Var(_) => write_term(arg, out),
                _ => paren(arg, out),
            }
        }
    }
}

fn paren(term: &Term, out: &mut String) {
    out.push('(');
    write_term(term, out);
    out.push(')');
}

pub fn print_type(ty: &Type) -> String {
    match ty {
        Type::Var(v) => v.clone(),
        Type::Bottom => "bot".into(),
        Type::Inter(ps) | Type::Union(ps) if ps.len() == 1 => print_type(&ps[0]),
        Type::Inter(ps) if ps.is_empty() => "top".into(),
        Type::Union(ps) if ps.is_empty() => "bot".into(),
        Type::Inter(ps) => ps.iter().map(print_operand).collect::<Vec<_>>().join(" /\\ "),
        Type::Union(ps) => ps.iter().map(print_operand).collect::<Vec<_>>().join(" \\/ "),
        Type::Arrow(l, r) => {
            let left = match strip_singleton(l) {
                t @ Type::Arrow(..) => format!("({})", print_type(t)),
                t => print_type(t),
            };
            format!("{left} -> {}", print_type(r))
        }
    }
}

fn strip_singleton(ty: &Type) -> &Type {
    match ty {
        Type::Inter(ps) | Type::Union(ps) if ps.len() == 1 => strip_singleton(&ps[0]),
        t => t,
    }
}

fn print_operand(ty: &Type) -> String {
    match strip_singleton(ty) {
        t @ (Type::Var(_) | Type::Bottom) => print_type(t),
        Type::Inter(ps) | Type::Union(ps) if ps.is_empty() => print_type(ty),
        t => format!("({})", print_type(t)),
    }
}

pub fn print_left_env(gamma: &LeftEnv) -> String {
    gamma
        .iter()
        .map(|(x, t)| format!("{x}:{}", print_type(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_right_env(delta: &RightEnv) -> String {
    delta
        .iter()
        .map(|(a, t)| format!("{a}:{}", print_type(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn print_judgment(gamma: &LeftEnv, term: &Term, ty: &Type, delta: &RightEnv) -> String {
    let g = print_left_env(gamma);
    let d = print_right_env(delta);
    format!(
        "{}|- {} : {} |{}",
        if g.is_empty() { String::new() } else { g + " " },
        print_term(term),
        print_type(ty),
        if d.is_empty() { String::new() } else { format!(" {d}") }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;

    #[test]
    fn parse_term_examples() {
        let t = parse_term("\\x.\\y.x y").unwrap();
        assert_eq!(
            t,
            Term::abs("x", Term::abs("y", Term::app(Term::var("x"), Term::var("y"))))
        );
        let t = parse_term("x y z").unwrap();
        assert_eq!(t, Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z")));
        let body = parse_term("mu a.[a] (x (\\y. mu b.[a] y))").unwrap();
        let expected = Term::mu(
            "a",
            "a",
            Term::app(Term::var("x"), Term::abs("y", Term::mu("b", "a", Term::var("y")))),
        );
        assert_eq!(body, expected);
    }

    #[test]
    fn unicode_synonyms() {
        let t = parse_term("λx.μα.[α](x (λy.μβ.[α]y))").unwrap();
        let u = parse_term("\\x. mu a.[a] x (\\y. mu b.[a] y)").unwrap();
        assert!(alpha_eq(&t, &u));
        let ty = parse_type_any("((A→B)→A)→A").unwrap();
        assert_eq!(ty, parse_type_any("((A -> B) -> A) -> A").unwrap());
        assert_eq!(parse_type_any("⊤ ∩ ⊥").unwrap(), parse_type_any("top /\\ bot").unwrap());
    }

    #[test]
    fn quoted_free_names() {
        let t = parse_term("\\y. mu a.['b] y").unwrap();
        assert_eq!(t, Term::abs("y", Term::mu("a", "b", Term::var("y"))));
    }

    #[test]
    fn reserved_words_are_not_variables() {
        assert!(parse_term("\\beta.beta").is_err());
        assert!(parse_term("mu beta.[beta] x").is_ok());
    }

    #[test]
    fn parse_type_examples() {
        let peirce = parse_type("((A->B)->A)->A", Language::Curry).unwrap();
        let ab = Type::arrow(Type::var("A"), Type::var("B"));
        assert_eq!(
            peirce,
            Type::arrow(Type::arrow(ab.clone(), Type::var("A")), Type::var("A"))
        );
        assert_eq!(
            parse_type("top -> B", Language::Strict).unwrap(),
            Type::arrow(Type::top(), Type::var("B"))
        );
        assert_eq!(
            parse_type("A \\/ (A -> B)", Language::Iu).unwrap(),
            Type::union(vec![Type::var("A"), ab])
        );
        assert!(matches!(
            parse_type("A \\/ B", Language::Curry),
            Err(GrammarError::LanguageViolation { .. })
        ));
        assert!(parse_type_any("A /\\ B \\/ C").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&Term::abs("x", Term::var("x"))), "\\x.x");
        assert_eq!(
            print_term(&Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z"))),
            "x y z"
        );
        assert_eq!(print_term(&Term::mu("a", "b", Term::var("x"))), "mu a.[b] x");
        let (a, b, c) = (Type::var("A"), Type::var("B"), Type::var("C"));
        assert_eq!(print_type(&Type::arrow(Type::inter(vec![a.clone(), b.clone()]), c.clone())), "A /\\ B -> C");
        assert_eq!(print_type(&Type::arrow(a.clone(), Type::arrow(b, c))), "A -> B -> C");
        assert_eq!(print_type(&Type::top()), "top");
        assert_eq!(print_type(&Type::union(vec![])), "bot");
        assert_eq!(print_type(&Type::Bottom), "bot");
    }

    #[test]
    fn errors_carry_spans() {
        let err = parse_term("\\x. (x").unwrap_err();
        assert_eq!(err.span, SourceSpan { start: 6, end: 6 });
        let err = parse_term("x $").unwrap_err();
        assert_eq!(err.span.start, 2);
    }

    #[test]
    fn judgments() {
        let j = parse_judgment("|- mu d.[d](\\x. mu b.[d] x) : A \\/ (A -> B) | ").unwrap();
        assert!(j.gamma.is_empty() && j.delta.is_empty());
        let j = parse_judgment("x:A /\\ B, y:C |- x y : D | a:A, 'b:bot").unwrap();
        assert_eq!(j.gamma.len(), 2);
        assert_eq!(j.delta.len(), 2);
        let printed = print_judgment(&j.gamma, &j.term, &j.ty, &j.delta);
        assert_eq!(printed, "x:A /\\ B, y:C |- x y : D | a:A, b:bot");
        assert_eq!(parse_judgment(&printed).unwrap(), j);
    }
}
