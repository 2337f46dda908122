//! Line-oriented source language for categories, markings, functors and
//! families.
//!
//! ```text
//! category C { objects: a, b; arrows: u: a -> b; relations: g.f = h; }
//! marking W in C { u }
//! functor F : C -> D { obj a -> x; arr u -> p; }
//! family X over B { obj i -> C with W; arr s -> F; }
//! ```
//!
//! Paths are written right-to-left with `.`; `id_a` is the identity of `a`.

use std::fmt::{self, Write};

use thiserror::Error;

/// Source position. Positions do not take part in equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A dotted path as written, outermost first.
pub type PathExpr = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub relations: Vec<(PathExpr, PathExpr)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingDecl {
    pub name: String,
    pub category: String,
    pub members: Vec<PathExpr>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, PathExpr)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDecl {
    pub object: String,
    pub category: String,
    pub marking: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDecl {
    pub name: String,
    pub base: String,
    pub fibers: Vec<FiberDecl>,
    pub arrows: Vec<(String, String)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Category(CategoryDecl),
    Marking(MarkingDecl),
    Functor(FunctorDecl),
    Family(FamilyDecl),
}

impl Decl {
    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Category(_) => "category",
            Decl::Marking(_) => "marking",
            Decl::Functor(_) => "functor",
            Decl::Family(_) => "family",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Decl::Category(d) => &d.name,
            Decl::Marking(d) => &d.name,
            Decl::Functor(d) => &d.name,
            Decl::Family(d) => &d.name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Decl::Category(d) => d.pos,
            Decl::Marking(d) => d.pos,
            Decl::Functor(d) => d.pos,
            Decl::Family(d) => d.pos,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: syntax error: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '<' | '@' | '+' | '*')
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let pos = Pos { line: i + 1, col: k + 1 };
            if c.is_whitespace() {
                k += 1;
            } else if c == '-' && chars.get(k + 1) == Some(&'>') {
                out.push((Tok::Arrow, pos));
                k += 2;
            } else if "{}:;,.=".contains(c) {
                out.push((Tok::Sym(c), pos));
                k += 1;
            } else if is_ident_char(c) {
                let start = k;
                while k < chars.len() && is_ident_char(chars[k]) {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().collect()), pos));
            } else {
                return Err(SyntaxError { pos, message: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        let found = self.peek().map_or("end of input".to_string(), Tok::to_string);
        Err(SyntaxError { pos: self.pos(), message: format!("expected {expected}, found {found}") })
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == word => {
                self.at += 1;
                Ok(())
            }
            _ => self.fail(&format!("`{word}`")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn arrow(&mut self) -> Result<(), SyntaxError> {
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            Ok(())
        } else {
            self.fail("`->`")
        }
    }

    fn path(&mut self) -> Result<PathExpr, SyntaxError> {
        let mut parts = vec![self.ident("a morphism name")?];
        while self.eat('.') {
            parts.push(self.ident("a morphism name")?);
        }
        Ok(parts)
    }

    /// Items separated by `,` up to (not including) `stop`.
    fn list<T>(&mut self, stop: char, mut item: impl FnMut(&mut Self) -> Result<T, SyntaxError>) -> Result<Vec<T>, SyntaxError> {
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::Sym(stop)) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(',') {
                return Ok(out);
            }
        }
    }

    fn category(&mut self, pos: Pos) -> Result<CategoryDecl, SyntaxError> {
        let name = self.ident("a category name")?;
        let mut d = CategoryDecl { name, objects: vec![], arrows: vec![], relations: vec![], pos };
        self.expect('{')?;
        while !self.eat('}') {
            let section = self.ident("`objects`, `arrows` or `relations`")?;
            self.expect(':')?;
            match section.as_str() {
                "objects" => d.objects.extend(self.list(';', |p| p.ident("an object name"))?),
                "arrows" => d.arrows.extend(self.list(';', |p| {
                    let name = p.ident("an arrow name")?;
                    p.expect(':')?;
                    let src = p.ident("a source object")?;
                    p.arrow()?;
                    let tgt = p.ident("a target object")?;
                    Ok(ArrowDecl { name, src, tgt })
                })?),
                "relations" => d.relations.extend(self.list(';', |p| {
                    let lhs = p.path()?;
                    p.expect('=')?;
                    Ok((lhs, p.path()?))
                })?),
                _ => {
                    self.at -= 2;
                    return self.fail("`objects`, `arrows` or `relations`");
                }
            }
            self.expect(';')?;
        }
        Ok(d)
    }

    fn marking(&mut self, pos: Pos) -> Result<MarkingDecl, SyntaxError> {
        let name = self.ident("a marking name")?;
        self.keyword("in")?;
        let category = self.ident("a category name")?;
        self.expect('{')?;
        let members = self.list('}', Self::path)?;
        self.expect('}')?;
        Ok(MarkingDecl { name, category, members, pos })
    }

    fn functor(&mut self, pos: Pos) -> Result<FunctorDecl, SyntaxError> {
        let name = self.ident("a functor name")?;
        self.expect(':')?;
        let source = self.ident("a source category")?;
        self.arrow()?;
        let target = self.ident("a target category")?;
        let mut d = FunctorDecl { name, source, target, objects: vec![], arrows: vec![], pos };
        self.expect('{')?;
        while !self.eat('}') {
            match self.ident("`obj` or `arr`")?.as_str() {
                "obj" => {
                    let a = self.ident("an object name")?;
                    self.arrow()?;
                    d.objects.push((a, self.ident("an object name")?));
                }
                "arr" => {
                    let u = self.ident("an arrow name")?;
                    self.arrow()?;
                    d.arrows.push((u, self.path()?));
                }
                _ => {
                    self.at -= 1;
                    return self.fail("`obj` or `arr`");
                }
            }
            self.expect(';')?;
        }
        Ok(d)
    }

    fn family(&mut self, pos: Pos) -> Result<FamilyDecl, SyntaxError> {
        let name = self.ident("a family name")?;
        self.keyword("over")?;
        let base = self.ident("a base category")?;
        let mut d = FamilyDecl { name, base, fibers: vec![], arrows: vec![], pos };
        self.expect('{')?;
        while !self.eat('}') {
            match self.ident("`obj` or `arr`")?.as_str() {
                "obj" => {
                    let object = self.ident("an object name")?;
                    self.arrow()?;
                    let category = self.ident("a category name")?;
                    let marking = match self.peek() {
                        Some(Tok::Ident(w)) if w == "with" => {
                            self.at += 1;
                            Some(self.ident("a marking name")?)
                        }
                        _ => None,
                    };
                    d.fibers.push(FiberDecl { object, category, marking });
                }
                "arr" => {
                    let u = self.ident("an arrow name")?;
                    self.arrow()?;
                    d.arrows.push((u, self.ident("a functor name")?));
                }
                _ => {
                    self.at -= 1;
                    return self.fail("`obj` or `arr`");
                }
            }
            self.expect(';')?;
        }
        Ok(d)
    }
}

pub fn parse(text: &str) -> Result<Vec<Decl>, SyntaxError> {
    let toks = lex(text)?;
    let end = Pos { line: text.lines().count().max(1), col: text.lines().last().map_or(1, |l| l.chars().count() + 1) };
    let mut p = Parser { toks, at: 0, end };
    let mut decls = Vec::new();
    while p.peek().is_some() {
        let pos = p.pos();
        let decl = match p.ident("a declaration")?.as_str() {
            "category" => Decl::Category(p.category(pos)?),
            "marking" => Decl::Marking(p.marking(pos)?),
            "functor" => Decl::Functor(p.functor(pos)?),
            "family" => Decl::Family(p.family(pos)?),
            _ => {
                p.at -= 1;
                return p.fail("`category`, `marking`, `functor` or `family`");
            }
        };
        decls.push(decl);
    }
    Ok(decls)
}

fn join_path(p: &PathExpr) -> String {
    p.join(".")
}

/// Canonical source text; [`parse`] inverts it.
pub fn to_source(decls: &[Decl]) -> String {
    let mut out = String::new();
    for (i, d) in decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match d {
            Decl::Category(c) => {
                writeln!(out, "category {} {{", c.name).unwrap();
                if !c.objects.is_empty() {
                    writeln!(out, "  objects: {};", c.objects.join(", ")).unwrap();
                }
                if !c.arrows.is_empty() {
                    let arrows: Vec<String> = c.arrows.iter().map(|a| format!("{}: {} -> {}", a.name, a.src, a.tgt)).collect();
                    writeln!(out, "  arrows: {};", arrows.join(", ")).unwrap();
                }
                if !c.relations.is_empty() {
                    let rels: Vec<String> = c.relations.iter().map(|(l, r)| format!("{} = {}", join_path(l), join_path(r))).collect();
                    writeln!(out, "  relations: {};", rels.join(", ")).unwrap();
                }
                out.push_str("}\n");
            }
            Decl::Marking(m) => {
                let members: Vec<String> = m.members.iter().map(join_path).collect();
                writeln!(out, "marking {} in {} {{ {} }}", m.name, m.category, members.join(", ")).unwrap();
            }
            Decl::Functor(f) => {
                writeln!(out, "functor {} : {} -> {} {{", f.name, f.source, f.target).unwrap();
                for (a, x) in &f.objects {
                    writeln!(out, "  obj {a} -> {x};").unwrap();
                }
                for (u, p) in &f.arrows {
                    writeln!(out, "  arr {u} -> {};", join_path(p)).unwrap();
                }
                out.push_str("}\n");
            }
            Decl::Family(f) => {
                writeln!(out, "family {} over {} {{", f.name, f.base).unwrap();
                for fib in &f.fibers {
                    match &fib.marking {
                        Some(w) => writeln!(out, "  obj {} -> {} with {w};", fib.object, fib.category).unwrap(),
                        None => writeln!(out, "  obj {} -> {};", fib.object, fib.category).unwrap(),
                    }
                }
                for (u, g) in &f.arrows {
                    writeln!(out, "  arr {u} -> {g};").unwrap();
                }
                out.push_str("}\n");
            }
        }
    }
    out
}
