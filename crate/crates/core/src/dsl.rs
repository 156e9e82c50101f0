//! Line-oriented lingware format.
//!
//! Every file is a sequence of statements. A statement starts at column 0
//! with a keyword; `sign` and `birule` statements own the indented lines
//! that follow them. `#` starts a comment. Files are UTF-8 and accented
//! characters are written literally.
//!
//! ```text
//! types top > cat agr            # hierarchy edges
//! approp cat agr=agr vform=vform # appropriateness
//! lang spanish
//! cell past3sg vform=fin tense=past agr=3sg
//! closure causative noun-noun    # rules closing the analysis lexicon
//! sign estirar1 vmain "estirar"
//!   syn.obj = obj-plain
//!   sem = estirar1(e,s,o)
//!   form past3sg "estiró"
//!   deriv tree manzano1
//! root s
//! rule s-np-vp: s(e) -> np(s)[agr=#a] vp(e,s)[agr=#a vform=fin]
//! bilex love1(x,y,z) <-> amar1(x,y,z) a1(z)
//! bilex sl-signs | sl-context <-> tl-signs | tl-context
//! birule support-verb
//!   in $n(x) <-> $m(x)
//!   when tl $m qualia.supp.ntrl = tener
//!   out be1(e,s,y) adjective($n)(y) <-> tener1(e,s,y) identity($m)(y)
//! ```

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct DslError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError {
        line,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermDecl {
    Var(String),
    Const(u32),
    Join(Vec<TermDecl>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub args: Vec<TermDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDecl {
    pub line: usize,
    pub id: String,
    pub ty: String,
    pub orth: String,
    /// `(path, type)` with paths starting at `syn` or `qualia`.
    pub assigns: Vec<(String, String)>,
    pub sem: Vec<PredDecl>,
    pub forms: Vec<(String, String)>,
    pub derivs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatVal {
    Type(String),
    Tag(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatDecl {
    pub ty: String,
    pub args: Vec<TermDecl>,
    pub feats: Vec<(String, FeatVal)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleDecl {
    pub line: usize,
    pub name: String,
    pub mother: CatDecl,
    pub daughters: Vec<CatDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefBase {
    /// A lexicon sign by id.
    Lexeme(String),
    /// A rule input variable, `$v`.
    Var(String),
    /// A monolingual rule applied to a rule input variable, `gerund($v)`.
    Transform { rule: String, var: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignRef {
    pub base: RefBase,
    pub args: Vec<TermDecl>,
    pub constraints: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EntryDecl {
    pub line: usize,
    pub sl: Vec<SignRef>,
    pub sl_context: Vec<SignRef>,
    pub tl: Vec<SignRef>,
    pub tl_context: Vec<SignRef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Sl,
    Tl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondDecl {
    pub side: Side,
    pub var: String,
    pub path: String,
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiruleDecl {
    pub line: usize,
    pub name: String,
    pub input: EntryDecl,
    pub conds: Vec<CondDecl>,
    pub output: EntryDecl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Types { parent: String, children: Vec<String> },
    Approp { ty: String, feats: Vec<(String, String)> },
    Lang(String),
    Cell { name: String, feats: Vec<(String, String)> },
    Closure(Vec<String>),
    Sign(SignDecl),
    Root(String),
    Rule(RuleDecl),
    Bilex(EntryDecl),
    Birule(BiruleDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Sym(&'static str),
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '*' | '\'')
}

fn lex(line_no: usize, s: &str) -> Result<Vec<Tok>, DslError> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' && (i + 1 >= chars.len() || !is_ident_char(chars[i + 1])) {
            break;
        }
        if c == '"' {
            let mut j = i + 1;
            let mut text = String::new();
            while j < chars.len() && chars[j] != '"' {
                text.push(chars[j]);
                j += 1;
            }
            if j >= chars.len() {
                return err(line_no, "unterminated string");
            }
            out.push(Tok::Str(text));
            i = j + 1;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            out.push(Tok::Sym("<->"));
            i += 3;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Tok::Sym("->"));
            i += 2;
            continue;
        }
        let sym = match c {
            '(' => Some("("),
            ')' => Some(")"),
            '[' => Some("["),
            ']' => Some("]"),
            '{' => Some("{"),
            '}' => Some("}"),
            ',' => Some(","),
            '=' => Some("="),
            '|' => Some("|"),
            '>' => Some(">"),
            ':' => Some(":"),
            '$' => Some("$"),
            '#' => Some("#"),
            '+' => Some("+"),
            _ => None,
        };
        if let Some(sym) = sym {
            out.push(Tok::Sym(sym));
            i += 1;
            continue;
        }
        if is_ident_char(c) {
            let mut j = i;
            let mut text = String::new();
            while j < chars.len() && is_ident_char(chars[j]) {
                if chars[j] == '-' && chars.get(j + 1) == Some(&'>') {
                    break;
                }
                text.push(chars[j]);
                j += 1;
            }
            out.push(Tok::Ident(text));
            i = j;
            continue;
        }
        return err(line_no, format!("unexpected character {c:?}"));
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Tok], line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), DslError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            err(self.line, format!("expected `{s}`, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => err(self.line, format!("expected a name, found {other:?}")),
        }
    }

    fn string(&mut self) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => err(self.line, format!("expected a quoted string, found {other:?}")),
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.line, format!("trailing input starting at {:?}", self.peek()))
        }
    }

    /// `name=value` pairs until end of input or `stop`.
    fn assignments(&mut self, stop: Option<&str>) -> Result<Vec<(String, String)>, DslError> {
        let mut out = Vec::new();
        while !self.at_end() && !stop.is_some_and(|s| self.is_sym(s)) {
            let k = self.ident()?;
            self.expect_sym("=")?;
            let v = self.ident()?;
            out.push((k, v));
            self.eat_sym(",");
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<TermDecl, DslError> {
        let first = self.atom_term()?;
        if !self.is_sym("+") {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat_sym("+") {
            parts.push(self.atom_term()?);
        }
        Ok(TermDecl::Join(parts))
    }

    fn atom_term(&mut self) -> Result<TermDecl, DslError> {
        let s = self.ident()?;
        Ok(match s.parse::<u32>() {
            Ok(n) => TermDecl::Const(n),
            Err(_) => TermDecl::Var(s),
        })
    }

    fn args(&mut self) -> Result<Vec<TermDecl>, DslError> {
        let mut out = Vec::new();
        if !self.eat_sym("(") {
            return Ok(out);
        }
        if self.eat_sym(")") {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if self.eat_sym(")") {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn pred(&mut self) -> Result<PredDecl, DslError> {
        let name = self.ident()?;
        let args = self.args()?;
        Ok(PredDecl { name, args })
    }

    fn category(&mut self) -> Result<CatDecl, DslError> {
        let ty = self.ident()?;
        let args = self.args()?;
        let mut feats = Vec::new();
        if self.eat_sym("[") {
            while !self.eat_sym("]") {
                let path = self.ident()?;
                self.expect_sym("=")?;
                let val = if self.eat_sym("#") {
                    FeatVal::Tag(self.ident()?)
                } else {
                    FeatVal::Type(self.ident()?)
                };
                feats.push((path, val));
                self.eat_sym(",");
            }
        }
        Ok(CatDecl { ty, args, feats })
    }

    fn sign_ref(&mut self) -> Result<SignRef, DslError> {
        let base = if self.eat_sym("$") {
            RefBase::Var(self.ident()?)
        } else {
            let name = self.ident()?;
            if self.is_sym("(") && matches!(self.toks.get(self.pos + 1), Some(Tok::Sym("$"))) {
                self.expect_sym("(")?;
                self.expect_sym("$")?;
                let var = self.ident()?;
                self.expect_sym(")")?;
                RefBase::Transform { rule: name, var }
            } else {
                RefBase::Lexeme(name)
            }
        };
        let args = self.args()?;
        let mut constraints = Vec::new();
        if self.eat_sym("{") {
            constraints = self.assignments(Some("}"))?;
            self.expect_sym("}")?;
        }
        Ok(SignRef {
            base,
            args,
            constraints,
        })
    }

    fn sign_refs(&mut self, stops: &[&str]) -> Result<Vec<SignRef>, DslError> {
        let mut out = Vec::new();
        while !self.at_end() && !stops.iter().any(|s| self.is_sym(s)) {
            out.push(self.sign_ref()?);
        }
        Ok(out)
    }

    fn entry(&mut self) -> Result<EntryDecl, DslError> {
        let sl = self.sign_refs(&["|", "<->"])?;
        let sl_context = if self.eat_sym("|") {
            self.sign_refs(&["<->"])?
        } else {
            Vec::new()
        };
        self.expect_sym("<->")?;
        let tl = self.sign_refs(&["|"])?;
        let tl_context = if self.eat_sym("|") {
            self.sign_refs(&[])?
        } else {
            Vec::new()
        };
        self.finish()?;
        Ok(EntryDecl {
            line: self.line,
            sl,
            sl_context,
            tl,
            tl_context,
        })
    }
}

/// Parses whitespace-separated sign references, as written on either side
/// of a `bilex` line, from every non-blank line of `src`.
pub fn parse_sign_refs(src: &str) -> Result<Vec<SignRef>, DslError> {
    let mut out = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let toks = lex(idx + 1, raw)?;
        let mut c = Cursor::new(&toks, idx + 1);
        out.extend(c.sign_refs(&[])?);
    }
    Ok(out)
}

/// Parses a whole lingware file into statements.
pub fn parse(src: &str) -> Result<Vec<Stmt>, DslError> {
    let mut stmts: Vec<Stmt> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex(line_no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let indented = raw.starts_with(' ') || raw.starts_with('\t');
        let mut c = Cursor::new(&toks, line_no);
        if indented {
            match stmts.last_mut() {
                Some(Stmt::Sign(sd)) => sign_attribute(&mut c, sd)?,
                Some(Stmt::Birule(bd)) => birule_attribute(&mut c, bd)?,
                _ => return err(line_no, "indented line outside a sign or birule block"),
            }
            continue;
        }
        let kw = c.ident()?;
        let stmt = match kw.as_str() {
            "types" => {
                let parent = c.ident()?;
                c.expect_sym(">")?;
                let mut children = Vec::new();
                while !c.at_end() {
                    children.push(c.ident()?);
                }
                if children.is_empty() {
                    return err(line_no, "`types` needs at least one subtype");
                }
                Stmt::Types { parent, children }
            }
            "approp" => {
                let ty = c.ident()?;
                Stmt::Approp {
                    ty,
                    feats: c.assignments(None)?,
                }
            }
            "lang" => {
                let l = c.ident()?;
                c.finish()?;
                Stmt::Lang(l)
            }
            "cell" => {
                let name = c.ident()?;
                Stmt::Cell {
                    name,
                    feats: c.assignments(None)?,
                }
            }
            "closure" => {
                let mut rules = Vec::new();
                while !c.at_end() {
                    rules.push(c.ident()?);
                }
                Stmt::Closure(rules)
            }
            "sign" => {
                let id = c.ident()?;
                let ty = c.ident()?;
                let orth = c.string()?;
                c.finish()?;
                Stmt::Sign(SignDecl {
                    line: line_no,
                    id,
                    ty,
                    orth,
                    assigns: Vec::new(),
                    sem: Vec::new(),
                    forms: Vec::new(),
                    derivs: Vec::new(),
                })
            }
            "root" => {
                let r = c.ident()?;
                c.finish()?;
                Stmt::Root(r)
            }
            "rule" => {
                let name = c.ident()?;
                c.expect_sym(":")?;
                let mother = c.category()?;
                c.expect_sym("->")?;
                let mut daughters = Vec::new();
                while !c.at_end() {
                    daughters.push(c.category()?);
                }
                if daughters.is_empty() {
                    return err(line_no, "rule without daughters");
                }
                Stmt::Rule(RuleDecl {
                    line: line_no,
                    name,
                    mother,
                    daughters,
                })
            }
            "bilex" => Stmt::Bilex(c.entry()?),
            "birule" => {
                let name = c.ident()?;
                c.finish()?;
                Stmt::Birule(BiruleDecl {
                    line: line_no,
                    name,
                    input: EntryDecl::default(),
                    conds: Vec::new(),
                    output: EntryDecl::default(),
                })
            }
            other => return err(line_no, format!("unknown statement `{other}`")),
        };
        stmts.push(stmt);
    }
    Ok(stmts)
}

fn sign_attribute(c: &mut Cursor<'_>, sd: &mut SignDecl) -> Result<(), DslError> {
    let key = c.ident()?;
    match key.as_str() {
        "sem" => {
            c.expect_sym("=")?;
            while !c.at_end() {
                sd.sem.push(c.pred()?);
            }
        }
        "form" => {
            let cell = c.ident()?;
            let form = c.string()?;
            c.finish()?;
            sd.forms.push((cell, form));
        }
        "deriv" => {
            let kind = c.ident()?;
            let target = c.ident()?;
            c.finish()?;
            sd.derivs.push((kind, target));
        }
        path if path.starts_with("syn") || path.starts_with("qualia") => {
            c.expect_sym("=")?;
            let v = c.ident()?;
            c.finish()?;
            sd.assigns.push((path.to_string(), v));
        }
        other => return err(c.line, format!("unknown sign attribute `{other}`")),
    }
    Ok(())
}

fn birule_attribute(c: &mut Cursor<'_>, bd: &mut BiruleDecl) -> Result<(), DslError> {
    let key = c.ident()?;
    match key.as_str() {
        "in" => bd.input = c.entry()?,
        "out" => bd.output = c.entry()?,
        "when" => {
            let side = match c.ident()?.as_str() {
                "sl" => Side::Sl,
                "tl" => Side::Tl,
                other => return err(c.line, format!("expected sl or tl, found {other}")),
            };
            c.expect_sym("$")?;
            let var = c.ident()?;
            let path = c.ident()?;
            c.expect_sym("=")?;
            let ty = c.ident()?;
            c.finish()?;
            bd.conds.push(CondDecl {
                side,
                var,
                path,
                ty,
            });
        }
        other => return err(c.line, format!("unknown birule attribute `{other}`")),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_sign_block() {
        let src = "sign estirar1 vmain \"estirar\"  # comment\n  syn.obj = obj-plain\n  sem = estirar1(e,s,o)\n  form past3sg \"estiró\"\n";
        let stmts = parse(src).unwrap();
        let Stmt::Sign(sd) = &stmts[0] else { panic!() };
        assert_eq!(sd.id, "estirar1");
        assert_eq!(sd.orth, "estirar");
        assert_eq!(sd.assigns, vec![("syn.obj".into(), "obj-plain".into())]);
        assert_eq!(sd.sem[0].args.len(), 3);
        assert_eq!(sd.forms, vec![("past3sg".into(), "estiró".into())]);
    }

    #[test]
    fn parses_entries_with_context_and_joins() {
        let stmts = parse(
            "bilex piece1(x) of1(x,y) advice1(y) <-> consejo1(x+y)\n\
             bilex | causative($v)(e,c,t) <-> hacer1(e,c,t) a1(t) | infinitive($w)(e,t)\n",
        )
        .unwrap();
        let Stmt::Bilex(e) = &stmts[0] else { panic!() };
        assert_eq!(e.sl.len(), 3);
        assert_eq!(
            e.tl[0].args,
            vec![TermDecl::Join(vec![
                TermDecl::Var("x".into()),
                TermDecl::Var("y".into())
            ])]
        );
        let Stmt::Bilex(e) = &stmts[1] else { panic!() };
        assert!(e.sl.is_empty());
        assert_eq!(e.sl_context.len(), 1);
        assert_eq!(
            e.sl_context[0].base,
            RefBase::Transform {
                rule: "causative".into(),
                var: "v".into()
            }
        );
        assert_eq!(e.tl.len(), 2);
        assert_eq!(e.tl_context.len(), 1);
    }

    #[test]
    fn parses_rules_with_tags() {
        let stmts = parse("rule s: s(e) -> np(s)[agr=#a] vp(e,s)[agr=#a, vform=fin]").unwrap();
        let Stmt::Rule(r) = &stmts[0] else { panic!() };
        assert_eq!(r.daughters.len(), 2);
        assert_eq!(r.daughters[1].feats[0].1, FeatVal::Tag("a".into()));
        assert_eq!(r.daughters[1].feats[1].1, FeatVal::Type("fin".into()));
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse("types top > a\n\nbogus x\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse("  sem = x(y)\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn birule_block() {
        let src = "birule support-verb\n  in $n(x) <-> $m(x)\n  when tl $m qualia.supp.ntrl = tener\n  out be1(e,s,y) adjective($n)(y) <-> tener1(e,s,y) identity($m)(y){syn.tense=pres}\n";
        let stmts = parse(src).unwrap();
        let Stmt::Birule(b) = &stmts[0] else { panic!() };
        assert_eq!(b.input.sl[0].base, RefBase::Var("n".into()));
        assert_eq!(b.conds[0].side, Side::Tl);
        assert_eq!(b.output.sl.len(), 2);
        assert_eq!(b.output.tl[1].constraints, vec![("syn.tense".into(), "pres".into())]);
    }

    #[test]
    fn parses_a_bag_of_sign_refs() {
        let refs = parse_sign_refs("# bag\njuan1(1) amar1(2,1,3){syn.tense=pres}\n\na1(3) maría1(3)\n").unwrap();
        assert_eq!(refs.len(), 4);
        assert_eq!(refs[1].args, vec![TermDecl::Const(2), TermDecl::Const(1), TermDecl::Const(3)]);
        assert_eq!(refs[1].constraints, vec![("syn.tense".into(), "pres".into())]);
        assert!(parse_sign_refs("juan1(1) <-> x").is_err());
    }
}
