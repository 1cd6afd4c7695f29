//! Workbench documents: declarations, assertions and run commands, with
//! names resolved at parse time.

use std::collections::HashMap;

use super::sexp::{self, Pos, Sexp, SyntaxError};
use crate::functor::FunctorExpr;
use crate::kernel::{stdlib, Code, Fuel, Term, UniverseSpec};
use crate::per::Per;
use crate::Nat;

/// PER-valued expressions usable in assertions.
#[derive(Clone, Debug)]
pub enum PerExpr {
    Named(String, Per),
    Exp(Box<PerExpr>, Box<PerExpr>),
    Prod(Box<PerExpr>, Box<PerExpr>),
    Meet(Vec<PerExpr>),
    Apply(Box<FunctorRef>, Box<PerExpr>),
    Lfp(Box<FunctorRef>),
    R0(Box<FunctorRef>, String),
    Nat(Box<FunctorRef>, Box<FunctorRef>, String),
}

/// Functor-valued expressions.
#[derive(Clone, Debug)]
pub enum FunctorRef {
    Expr(FunctorExpr),
    Hom(PerExpr),
    Star(Box<FunctorRef>, String),
    /// `X ↦ (X ⇒ A)`: an object map only, for monotonicity checks.
    Contra(PerExpr),
}

#[derive(Clone, Debug)]
pub enum Assertion {
    Subper(PerExpr, PerExpr),
    Equal(PerExpr, PerExpr),
    Related(PerExpr, Code, Code),
    Member(Code, PerExpr),
    Classes(PerExpr, usize),
    Size(PerExpr, usize),
    Morphism(Code, PerExpr, PerExpr),
    SameMorphism(Code, Code, PerExpr, PerExpr),
    Iso(Code, PerExpr, PerExpr),
    Homs(PerExpr, PerExpr, usize),
    Encode(Code, Nat),
    Reduces(Code, Code),
    Diverges(Code),
    Monotone(FunctorRef, Option<String>),
    Realizable(FunctorRef, Option<String>),
    IdentityRealizer(FunctorRef, Option<String>),
    StrictIdentity(FunctorRef),
    Psi(FunctorRef, Option<String>),
    Fixpoint(FunctorRef, PerExpr),
    Fixmap(FunctorRef, PerExpr),
    Iterations(FunctorRef, usize),
    Algebra(String),
    Initial(FunctorRef, String),
    Yoneda(FunctorRef, String, PerExpr),
    Not(Box<Assertion>),
}

#[derive(Clone, Debug)]
pub enum RunCmd {
    Fixpoint(String),
    InitialAlgebra(String, String),
    Monotonize(String, String),
    CheckAll,
}

#[derive(Clone, Debug)]
pub enum Form {
    Universe(UniverseSpec),
    Fuel(Fuel),
    Assert(Assertion),
    Run(RunCmd),
}

#[derive(Clone, Debug)]
pub struct AlgebraDecl {
    pub name: String,
    pub functor: String,
    pub carrier: String,
    pub structure: Code,
}

#[derive(Clone, Debug)]
pub enum Family {
    Pers(Vec<(String, Per)>),
    Algebras(Vec<String>),
}

#[derive(Clone, Debug, Default)]
pub struct WorkbenchDoc {
    /// Executable forms in source order, with their text for report names.
    pub forms: Vec<(Form, Pos, String)>,
    pub pers: Vec<(String, Per)>,
    pub functors: Vec<(String, FunctorExpr)>,
    pub algebras: Vec<AlgebraDecl>,
    pub families: Vec<(String, Family)>,
    names: HashMap<String, Pos>,
}

impl WorkbenchDoc {
    pub fn per(&self, name: &str) -> Option<&Per> {
        self.pers.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorExpr> {
        self.functors.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraDecl> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn family(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    fn declare(&mut self, name: &Sexp) -> Result<String, SyntaxError> {
        let n = ident(name)?;
        if let Some(first) = self.names.get(&n) {
            return Err(SyntaxError::new(
                name.pos(),
                format!("`{n}` is already declared at {first}"),
            ));
        }
        self.names.insert(n.clone(), name.pos());
        Ok(n)
    }
}

fn err<T>(at: &Sexp, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError::new(at.pos(), msg))
}

fn ident(s: &Sexp) -> Result<String, SyntaxError> {
    match s.atom() {
        Some(a) if !a.starts_with(|c: char| c.is_ascii_digit()) => Ok(a.to_owned()),
        _ => err(s, format!("expected a name, found `{s}`")),
    }
}

fn natural(s: &Sexp) -> Result<u64, SyntaxError> {
    s.atom()
        .and_then(|a| a.parse().ok())
        .map_or_else(|| err(s, format!("expected a natural number, found `{s}`")), Ok)
}

fn arity<'a>(form: &'a Sexp, args: &'a [Sexp], n: usize, shape: &str) -> Result<&'a [Sexp], SyntaxError> {
    if args.len() != n {
        return err(form, format!("expected {shape}"));
    }
    Ok(args)
}

/// Term literal: a natural code, `K | S | I`, the named combinators
/// `B | PAIR | FST | SND`, or a parenthesized left-associative application.
pub fn code_literal(s: &Sexp) -> Result<Code, SyntaxError> {
    Ok(Code::from_term(term_literal(s)?))
}

fn term_literal(s: &Sexp) -> Result<Term, SyntaxError> {
    match s {
        Sexp::Atom(a, _) => {
            let lib = stdlib();
            Ok(match a.as_str() {
                "K" => Term::K,
                "S" => Term::S,
                "I" => Term::I,
                "B" => lib.b.term().clone(),
                "PAIR" => lib.pair.term().clone(),
                "FST" => lib.fst.term().clone(),
                "SND" => lib.snd.term().clone(),
                _ => match a.parse::<Nat>() {
                    Ok(n) => Code::from_nat(&n).into_term(),
                    Err(_) => return err(s, format!("`{a}` is not a code literal")),
                },
            })
        }
        Sexp::List(items, _) => {
            let (first, rest) = items
                .split_first()
                .map_or_else(|| err(s, "empty application"), Ok)?;
            let mut t = term_literal(first)?;
            for arg in rest {
                t = Term::app(t, term_literal(arg)?);
            }
            Ok(t)
        }
    }
}

impl WorkbenchDoc {
    fn per_ref(&self, s: &Sexp) -> Result<Per, SyntaxError> {
        let n = ident(s)?;
        if let Some(p) = self.per(&n) {
            return Ok(p.clone());
        }
        if n == "empty" {
            return Ok(Per::empty());
        }
        err(s, format!("unknown PER `{n}`"))
    }

    fn family_ref(&self, s: &Sexp, want_algebras: Option<bool>) -> Result<String, SyntaxError> {
        let n = ident(s)?;
        match (self.family(&n), want_algebras) {
            (None, _) => err(s, format!("unknown family `{n}`")),
            (Some(Family::Pers(_)), Some(true)) => err(s, format!("family `{n}` lists PERs, expected algebras")),
            (Some(Family::Algebras(_)), Some(false)) => {
                err(s, format!("family `{n}` lists algebras, expected PERs"))
            }
            _ => Ok(n),
        }
    }

    fn functor_expr(&self, s: &Sexp) -> Result<FunctorExpr, SyntaxError> {
        if let Some(a) = s.atom() {
            if a == "id" {
                return Ok(FunctorExpr::Id);
            }
            return self
                .functor(a)
                .cloned()
                .map_or_else(|| err(s, format!("unknown functor `{a}`")), Ok);
        }
        match s.head() {
            Some(("const", args)) => {
                let [p] = arity(s, args, 1, "(const P)")? else { unreachable!() };
                Ok(FunctorExpr::constant(self.per_ref(p)?))
            }
            Some(("prod", args)) => {
                let [l, r] = arity(s, args, 2, "(prod E E)")? else { unreachable!() };
                Ok(FunctorExpr::prod(self.functor_expr(l)?, self.functor_expr(r)?))
            }
            Some(("exp", args)) => {
                let [p, e] = arity(s, args, 2, "(exp P E)")? else { unreachable!() };
                Ok(FunctorExpr::exp_from(self.per_ref(p)?, self.functor_expr(e)?))
            }
            _ => err(s, format!("expected id, (const P), (prod E E) or (exp P E), found `{s}`")),
        }
    }

    fn functor_ref(&self, s: &Sexp) -> Result<FunctorRef, SyntaxError> {
        match s.head() {
            Some(("hom", args)) => {
                let [x] = arity(s, args, 1, "(hom P)")? else { unreachable!() };
                Ok(FunctorRef::Hom(self.per_expr(x)?))
            }
            Some(("star", args)) => {
                let [f, fam] = arity(s, args, 2, "(star F FAMILY)")? else { unreachable!() };
                Ok(FunctorRef::Star(
                    Box::new(self.functor_ref(f)?),
                    self.family_ref(fam, Some(false))?,
                ))
            }
            Some(("contra", args)) => {
                let [a] = arity(s, args, 1, "(contra P)")? else { unreachable!() };
                Ok(FunctorRef::Contra(self.per_expr(a)?))
            }
            _ => Ok(FunctorRef::Expr(self.functor_expr(s)?)),
        }
    }

    fn per_expr(&self, s: &Sexp) -> Result<PerExpr, SyntaxError> {
        let Some((head, args)) = s.head() else {
            let n = ident(s)?;
            return Ok(PerExpr::Named(n, self.per_ref(s)?));
        };
        match head {
            "exp" | "prod" => {
                let [a, b] = arity(s, args, 2, "(exp A B) or (prod A B)")? else { unreachable!() };
                let (a, b) = (Box::new(self.per_expr(a)?), Box::new(self.per_expr(b)?));
                Ok(if head == "exp" { PerExpr::Exp(a, b) } else { PerExpr::Prod(a, b) })
            }
            "meet" if !args.is_empty() => {
                Ok(PerExpr::Meet(args.iter().map(|a| self.per_expr(a)).collect::<Result<_, _>>()?))
            }
            "apply" => {
                let [f, r] = arity(s, args, 2, "(apply F P)")? else { unreachable!() };
                Ok(PerExpr::Apply(Box::new(self.functor_ref(f)?), Box::new(self.per_expr(r)?)))
            }
            "lfp" => {
                let [f] = arity(s, args, 1, "(lfp F)")? else { unreachable!() };
                Ok(PerExpr::Lfp(Box::new(self.functor_ref(f)?)))
            }
            "r0" => {
                let [f, fam] = arity(s, args, 2, "(r0 F FAMILY)")? else { unreachable!() };
                Ok(PerExpr::R0(Box::new(self.functor_ref(f)?), self.family_ref(fam, Some(true))?))
            }
            "nat" => {
                let [f, g, fam] = arity(s, args, 3, "(nat F G FAMILY)")? else { unreachable!() };
                Ok(PerExpr::Nat(
                    Box::new(self.functor_ref(f)?),
                    Box::new(self.functor_ref(g)?),
                    self.family_ref(fam, Some(false))?,
                ))
            }
            _ => err(s, format!("unknown PER expression `{s}`")),
        }
    }

    fn optional_family(&self, args: &[Sexp]) -> Result<Option<String>, SyntaxError> {
        args.first().map(|f| self.family_ref(f, Some(false))).transpose()
    }

    fn assertion(&self, s: &Sexp) -> Result<Assertion, SyntaxError> {
        let (head, args) = s
            .head()
            .map_or_else(|| err(s, format!("expected an assertion, found `{s}`")), Ok)?;
        let two_pers = |shape| -> Result<(PerExpr, PerExpr), SyntaxError> {
            let [a, b] = arity(s, args, 2, shape)? else { unreachable!() };
            Ok((self.per_expr(a)?, self.per_expr(b)?))
        };
        let functor_and_family = |shape| -> Result<(FunctorRef, Option<String>), SyntaxError> {
            if args.is_empty() || args.len() > 2 {
                return err(s, format!("expected {shape}"));
            }
            Ok((self.functor_ref(&args[0])?, self.optional_family(&args[1..])?))
        };
        Ok(match head {
            "subper" => {
                let (a, b) = two_pers("(subper A B)")?;
                Assertion::Subper(a, b)
            }
            "equal" => {
                let (a, b) = two_pers("(equal A B)")?;
                Assertion::Equal(a, b)
            }
            "related" => {
                let [p, a, b] = arity(s, args, 3, "(related P a b)")? else { unreachable!() };
                Assertion::Related(self.per_expr(p)?, code_literal(a)?, code_literal(b)?)
            }
            "member" => {
                let [n, p] = arity(s, args, 2, "(member N P)")? else { unreachable!() };
                Assertion::Member(code_literal(n)?, self.per_expr(p)?)
            }
            "classes" | "size" => {
                let [p, n] = arity(s, args, 2, "(classes P N) or (size P N)")? else { unreachable!() };
                let (p, n) = (self.per_expr(p)?, natural(n)? as usize);
                if head == "classes" {
                    Assertion::Classes(p, n)
                } else {
                    Assertion::Size(p, n)
                }
            }
            "morphism" | "iso" => {
                let [n, a, b] = arity(s, args, 3, "(morphism N A B)")? else { unreachable!() };
                let (n, a, b) = (code_literal(n)?, self.per_expr(a)?, self.per_expr(b)?);
                if head == "morphism" {
                    Assertion::Morphism(n, a, b)
                } else {
                    Assertion::Iso(n, a, b)
                }
            }
            "same-morphism" => {
                let [m, n, a, b] = arity(s, args, 4, "(same-morphism M N A B)")? else { unreachable!() };
                Assertion::SameMorphism(code_literal(m)?, code_literal(n)?, self.per_expr(a)?, self.per_expr(b)?)
            }
            "homs" => {
                let [a, b, n] = arity(s, args, 3, "(homs A B N)")? else { unreachable!() };
                Assertion::Homs(self.per_expr(a)?, self.per_expr(b)?, natural(n)? as usize)
            }
            "encode" => {
                let [t, n] = arity(s, args, 2, "(encode TERM N)")? else { unreachable!() };
                let n = n
                    .atom()
                    .and_then(|a| a.parse::<Nat>().ok())
                    .map_or_else(|| err(n, "expected a natural number"), Ok)?;
                Assertion::Encode(code_literal(t)?, n)
            }
            "reduces" => {
                let [a, b] = arity(s, args, 2, "(reduces TERM TERM)")? else { unreachable!() };
                Assertion::Reduces(code_literal(a)?, code_literal(b)?)
            }
            "diverges" => {
                let [a] = arity(s, args, 1, "(diverges TERM)")? else { unreachable!() };
                Assertion::Diverges(code_literal(a)?)
            }
            "monotone" => {
                let (f, fam) = functor_and_family("(monotone F [FAMILY])")?;
                Assertion::Monotone(f, fam)
            }
            "realizable" => {
                let (f, fam) = functor_and_family("(realizable F [FAMILY])")?;
                Assertion::Realizable(f, fam)
            }
            "identity-realizer" => {
                let (f, fam) = functor_and_family("(identity-realizer F [FAMILY])")?;
                Assertion::IdentityRealizer(f, fam)
            }
            "strict-identity" => {
                let [f] = arity(s, args, 1, "(strict-identity F)")? else { unreachable!() };
                Assertion::StrictIdentity(self.functor_ref(f)?)
            }
            "psi" => {
                let (f, fam) = functor_and_family("(psi F [FAMILY])")?;
                Assertion::Psi(f, fam)
            }
            "fixpoint" | "fixmap" => {
                let [f, p] = arity(s, args, 2, "(fixpoint F P)")? else { unreachable!() };
                let (f, p) = (self.functor_ref(f)?, self.per_expr(p)?);
                if head == "fixpoint" {
                    Assertion::Fixpoint(f, p)
                } else {
                    Assertion::Fixmap(f, p)
                }
            }
            "iterations" => {
                let [f, n] = arity(s, args, 2, "(iterations F N)")? else { unreachable!() };
                Assertion::Iterations(self.functor_ref(f)?, natural(n)? as usize)
            }
            "algebra" => {
                let [a] = arity(s, args, 1, "(algebra NAME)")? else { unreachable!() };
                let n = ident(a)?;
                if self.algebra(&n).is_none() {
                    return err(a, format!("unknown algebra `{n}`"));
                }
                Assertion::Algebra(n)
            }
            "initial" => {
                let [f, fam] = arity(s, args, 2, "(initial F FAMILY)")? else { unreachable!() };
                Assertion::Initial(self.functor_ref(f)?, self.family_ref(fam, Some(true))?)
            }
            "yoneda" => {
                let [f, fam, x] = arity(s, args, 3, "(yoneda F FAMILY X)")? else { unreachable!() };
                Assertion::Yoneda(self.functor_ref(f)?, self.family_ref(fam, Some(false))?, self.per_expr(x)?)
            }
            "not" => {
                let [a] = arity(s, args, 1, "(not ASSERTION)")? else { unreachable!() };
                Assertion::Not(Box::new(self.assertion(a)?))
            }
            other => return err(s, format!("unknown assertion `{other}`")),
        })
    }

    fn declare_per(&mut self, form: &Sexp, args: &[Sexp]) -> Result<(), SyntaxError> {
        let [name, carrier, classes] = arity(form, args, 3, "(per NAME (carrier n ...) (classes (n ...) ...))")? else {
            unreachable!()
        };
        let carrier_codes = match carrier.head() {
            Some(("carrier", cs)) => cs.iter().map(code_literal).collect::<Result<Vec<_>, _>>()?,
            _ => return err(carrier, "expected (carrier n ...)"),
        };
        let blocks = match classes.head() {
            Some(("classes", bs)) => bs,
            _ => return err(classes, "expected (classes (n ...) ...)"),
        };
        let mut parsed = Vec::with_capacity(blocks.len());
        for b in blocks {
            let items = b.list().map_or_else(|| err(b, "expected a class (n ...)"), Ok)?;
            parsed.push(items.iter().map(code_literal).collect::<Result<Vec<_>, _>>()?);
        }
        let mut listed: Vec<Code> = parsed.iter().flatten().cloned().collect();
        listed.sort();
        let mut declared = carrier_codes.clone();
        declared.sort();
        declared.dedup();
        if declared.len() != carrier_codes.len() {
            return err(carrier, "carrier lists a code twice");
        }
        if listed != declared {
            return err(classes, "classes do not partition the carrier");
        }
        let per = Per::new(parsed).map_err(|e| SyntaxError::new(classes.pos(), e.to_string()))?;
        let name = self.declare(name)?;
        self.pers.push((name, per));
        Ok(())
    }

    fn form(&mut self, form: &Sexp) -> Result<(), SyntaxError> {
        let (head, args) = form
            .head()
            .map_or_else(|| err(form, format!("expected a form, found `{form}`")), Ok)?;
        let text = form.to_string();
        match head {
            "per" => self.declare_per(form, args)?,
            "family" => {
                let (name, members) = args
                    .split_first()
                    .filter(|(_, m)| !m.is_empty())
                    .map_or_else(|| err(form, "expected (family NAME member ...)"), Ok)?;
                let mut pers = Vec::new();
                let mut algebras = Vec::new();
                for m in members {
                    let n = ident(m)?;
                    if let Some(p) = self.per(&n) {
                        pers.push((n, p.clone()));
                    } else if self.algebra(&n).is_some() {
                        algebras.push(n);
                    } else if n == "empty" {
                        pers.push((n, Per::empty()));
                    } else {
                        return err(m, format!("unknown PER or algebra `{n}`"));
                    }
                }
                let family = match (pers.is_empty(), algebras.is_empty()) {
                    (false, true) => Family::Pers(pers),
                    (true, false) => Family::Algebras(algebras),
                    _ => return err(form, "a family lists PERs or algebras, not both"),
                };
                let name = self.declare(name)?;
                self.families.push((name, family));
            }
            "universe" => {
                let [spec] = arity(form, args, 1, "(universe (codes N)) or (universe (terms K))")? else {
                    unreachable!()
                };
                let u = match spec.head() {
                    Some(("codes", [n])) => UniverseSpec::Codes(natural(n)?),
                    Some(("terms", [k])) => UniverseSpec::Terms(natural(k)? as u32),
                    Some(("explicit", cs)) => UniverseSpec::Explicit(cs.iter().map(natural).collect::<Result<_, _>>()?),
                    _ => return err(spec, "expected (codes N), (terms K) or (explicit n ...)"),
                };
                self.forms.push((Form::Universe(u), form.pos(), text));
            }
            "fuel" => {
                let [n] = arity(form, args, 1, "(fuel N)")? else { unreachable!() };
                let fuel = Fuel::new(natural(n)?).map_err(|e| SyntaxError::new(n.pos(), e.to_string()))?;
                self.forms.push((Form::Fuel(fuel), form.pos(), text));
            }
            "functor" => {
                let [name, e] = arity(form, args, 2, "(functor NAME E)")? else { unreachable!() };
                let expr = self.functor_expr(e)?;
                let name = self.declare(name)?;
                self.functors.push((name, expr));
            }
            "algebra" => {
                let [name, f, c, st] = arity(
                    form,
                    args,
                    4,
                    "(algebra NAME (functor F) (carrier P) (structure CODE))",
                )?
                else {
                    unreachable!()
                };
                let functor = match f.head() {
                    Some(("functor", [n])) => {
                        let n2 = ident(n)?;
                        if self.functor(&n2).is_none() {
                            return err(n, format!("unknown functor `{n2}`"));
                        }
                        n2
                    }
                    _ => return err(f, "expected (functor F)"),
                };
                let carrier = match c.head() {
                    Some(("carrier", [p])) => {
                        self.per_ref(p)?;
                        ident(p)?
                    }
                    _ => return err(c, "expected (carrier P)"),
                };
                let structure = match st.head() {
                    Some(("structure", [code])) => code_literal(code)?,
                    _ => return err(st, "expected (structure CODE)"),
                };
                let name = self.declare(name)?;
                self.algebras.push(AlgebraDecl {
                    name,
                    functor,
                    carrier,
                    structure,
                });
            }
            "assert" => {
                let [a] = arity(form, args, 1, "(assert CHECK)")? else { unreachable!() };
                let a = self.assertion(a)?;
                self.forms.push((Form::Assert(a), form.pos(), text));
            }
            "run" => {
                let cmd = match args {
                    [c] if c.atom() == Some("check-all") => RunCmd::CheckAll,
                    [c, f] if c.atom() == Some("fixpoint") => RunCmd::Fixpoint(self.functor_name(f)?),
                    [c, f, fam] if c.atom() == Some("initial-algebra") => {
                        RunCmd::InitialAlgebra(self.functor_name(f)?, self.family_ref(fam, Some(true))?)
                    }
                    [c, f, fam] if c.atom() == Some("monotonize") => {
                        RunCmd::Monotonize(self.functor_name(f)?, self.family_ref(fam, Some(false))?)
                    }
                    _ => {
                        return err(
                            form,
                            "expected (run fixpoint F), (run initial-algebra F FAMILY), \
                             (run monotonize F FAMILY) or (run check-all)",
                        )
                    }
                };
                self.forms.push((Form::Run(cmd), form.pos(), text));
            }
            other => return err(form, format!("unknown form `{other}`")),
        }
        Ok(())
    }

    fn functor_name(&self, s: &Sexp) -> Result<String, SyntaxError> {
        let n = ident(s)?;
        if self.functor(&n).is_none() {
            return err(s, format!("unknown functor `{n}`"));
        }
        Ok(n)
    }
}

/// Parse and resolve a workbench file.
pub fn parse_workbench(text: &str) -> Result<WorkbenchDoc, SyntaxError> {
    let mut doc = WorkbenchDoc::default();
    for form in sexp::parse(text)? {
        doc.form(&form)?;
    }
    Ok(doc)
}
