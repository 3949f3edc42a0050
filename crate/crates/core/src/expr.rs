//! Expression trees for functions of one or more generalized-number
//! variables: polynomials over expansion constants, the smooth
//! builtins, division with per-node inversion truncation, the
//! norm-square scale node, and definite integrals. Evaluation is exact
//! on polynomial nodes; builtins expand the classical function as a
//! Taylor series around the shadow of the argument, truncated at the
//! working truncation.

use std::fmt;

use crate::error::{Error, Result};
use crate::exp::Trunc;
use crate::gennum::{Coef, GenNum, DEFAULT_TRUNC};

/// Smooth builtin functions (plus the conjugation family, which is
/// exact term-wise rather than a Taylor expansion).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Conj,
    Re,
    Im,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Log => "log",
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Sqrt => "sqrt",
            Builtin::Conj => "conj",
            Builtin::Re => "re",
            Builtin::Im => "im",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        match name {
            "exp" => Some(Builtin::Exp),
            "log" => Some(Builtin::Log),
            "sin" => Some(Builtin::Sin),
            "cos" => Some(Builtin::Cos),
            "sqrt" => Some(Builtin::Sqrt),
            "conj" => Some(Builtin::Conj),
            "re" => Some(Builtin::Re),
            "im" => Some(Builtin::Im),
            _ => None,
        }
    }
}

/// A closed expression over variables `x1..xn`.
#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Var(usize),
    Const(GenNum),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division records its own inversion truncation; `None` means the
    /// working truncation of the evaluation.
    Div {
        num: Box<Expr>,
        den: Box<Expr>,
        trunc: Option<Trunc>,
    },
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Builtin, Box<Expr>),
    /// `x -> beta_{norm(x)^2}`, the scale element of squared norm: the
    /// almost-constant function with vanishing sharp derivative.
    BetaNormSq(Box<Expr>),
    /// Definite integral of a one-variable integrand; the bounds live
    /// in the enclosing scope.
    Integral {
        integrand: Box<GenFunc>,
        lower: Box<Expr>,
        upper: Box<Expr>,
    },
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(x: GenNum) -> Expr {
        Expr::Const(x)
    }

    pub fn real(c: f64) -> Expr {
        Expr::Const(GenNum::from_real(c))
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div {
            num: Box::new(self),
            den: Box::new(rhs),
            trunc: None,
        }
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn pow(self, k: i32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn call(builtin: Builtin, arg: Expr) -> Expr {
        Expr::Call(builtin, Box::new(arg))
    }

    pub fn beta_norm_sq(arg: Expr) -> Expr {
        Expr::BetaNormSq(Box::new(arg))
    }

    fn max_var(&self) -> usize {
        match self {
            Expr::Var(i) => i + 1,
            Expr::Const(_) => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Div { num, den, .. } => num.max_var().max(den.max_var()),
            Expr::Neg(a) | Expr::Call(_, a) | Expr::BetaNormSq(a) => a.max_var(),
            Expr::Pow(a, _) => a.max_var(),
            Expr::Integral { lower, upper, .. } => lower.max_var().max(upper.max_var()),
        }
    }

    /// Replace each `Var(i)` by `subs[i]`. Integrand bodies keep their
    /// own scope; only their bounds are rewritten.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => subs
                .get(*i)
                .cloned()
                .unwrap_or_else(|| Expr::Var(*i)),
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Add(a, b) => a.substitute(subs).add(b.substitute(subs)),
            Expr::Sub(a, b) => a.substitute(subs).sub(b.substitute(subs)),
            Expr::Mul(a, b) => a.substitute(subs).mul(b.substitute(subs)),
            Expr::Div { num, den, trunc } => Expr::Div {
                num: Box::new(num.substitute(subs)),
                den: Box::new(den.substitute(subs)),
                trunc: trunc.clone(),
            },
            Expr::Neg(a) => a.substitute(subs).neg(),
            Expr::Pow(a, k) => a.substitute(subs).pow(*k),
            Expr::Call(b, a) => Expr::call(*b, a.substitute(subs)),
            Expr::BetaNormSq(a) => Expr::beta_norm_sq(a.substitute(subs)),
            Expr::Integral {
                integrand,
                lower,
                upper,
            } => Expr::Integral {
                integrand: integrand.clone(),
                lower: Box::new(lower.substitute(subs)),
                upper: Box::new(upper.substitute(subs)),
            },
        }
    }

    /// Symbolic derivative with respect to `var`. Fails on nodes that
    /// are not complex-differentiable (`conj`, `re`, `im`, the
    /// norm-square node).
    pub fn diff(&self, var: usize) -> Result<Expr> {
        Ok(match self {
            Expr::Var(i) => {
                if *i == var {
                    Expr::real(1.0)
                } else {
                    Expr::real(0.0)
                }
            }
            Expr::Const(_) => Expr::real(0.0),
            Expr::Add(a, b) => a.diff(var)?.add(b.diff(var)?),
            Expr::Sub(a, b) => a.diff(var)?.sub(b.diff(var)?),
            Expr::Mul(a, b) => {
                let da = a.diff(var)?;
                let db = b.diff(var)?;
                da.mul((**b).clone()).add((**a).clone().mul(db))
            }
            Expr::Div { num, den, trunc } => {
                let dn = num.diff(var)?;
                let dd = den.diff(var)?;
                let top = dn.mul((**den).clone()).sub((**num).clone().mul(dd));
                Expr::Div {
                    num: Box::new(top),
                    den: Box::new((**den).clone().pow(2)),
                    trunc: trunc.clone(),
                }
            }
            Expr::Neg(a) => a.diff(var)?.neg(),
            Expr::Pow(a, k) => {
                if *k == 0 {
                    Expr::real(0.0)
                } else {
                    Expr::real(f64::from(*k))
                        .mul((**a).clone().pow(k - 1))
                        .mul(a.diff(var)?)
                }
            }
            Expr::Call(b, a) => {
                let da = a.diff(var)?;
                let inner = (**a).clone();
                match b {
                    Builtin::Exp => Expr::call(Builtin::Exp, inner).mul(da),
                    Builtin::Log => da.div(inner),
                    Builtin::Sin => Expr::call(Builtin::Cos, inner).mul(da),
                    Builtin::Cos => Expr::call(Builtin::Sin, inner).neg().mul(da),
                    Builtin::Sqrt => da.div(Expr::real(2.0).mul(Expr::call(Builtin::Sqrt, inner))),
                    Builtin::Conj | Builtin::Re | Builtin::Im => {
                        return Err(Error::GrammarUnsupported {
                            detail: format!("{} has no complex derivative", b.name()),
                        })
                    }
                }
            }
            Expr::BetaNormSq(_) => {
                return Err(Error::GrammarUnsupported {
                    detail: "betanormsq has no symbolic derivative".into(),
                })
            }
            Expr::Integral {
                integrand,
                lower,
                upper,
            } => {
                let fu = integrand.body().substitute(&[(**upper).clone()]);
                let fl = integrand.body().substitute(&[(**lower).clone()]);
                fu.mul(upper.diff(var)?).sub(fl.mul(lower.diff(var)?))
            }
        })
    }

    /// True when the expression is built from polynomial nodes and the
    /// smooth builtins only (the grammar of classical smooth functions).
    pub fn is_smooth_classical(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_smooth_classical() && b.is_smooth_classical()
            }
            Expr::Div { num, den, .. } => num.is_smooth_classical() && den.is_smooth_classical(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_smooth_classical(),
            Expr::Call(_, a) => a.is_smooth_classical(),
            Expr::BetaNormSq(_) => false,
            Expr::Integral { .. } => false,
        }
    }
}

fn fmt_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Var(i) => write!(f, "x{}", i + 1),
        Expr::Const(c) => {
            if c.terms().len() > 1 || !c.trunc().is_infinite() {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        Expr::Add(a, b) => {
            fmt_expr(a, f)?;
            write!(f, " + ")?;
            fmt_expr(b, f)
        }
        Expr::Sub(a, b) => {
            fmt_expr(a, f)?;
            write!(f, " - ")?;
            paren(b, f)
        }
        Expr::Mul(a, b) => {
            paren(a, f)?;
            write!(f, "*")?;
            paren(b, f)
        }
        Expr::Div { num, den, .. } => {
            paren(num, f)?;
            write!(f, "/")?;
            paren(den, f)
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            paren(a, f)
        }
        Expr::Pow(a, k) => {
            paren(a, f)?;
            write!(f, "^{k}")
        }
        Expr::Call(b, a) => {
            write!(f, "{}(", b.name())?;
            fmt_expr(a, f)?;
            write!(f, ")")
        }
        Expr::BetaNormSq(a) => {
            write!(f, "betanormsq(")?;
            fmt_expr(a, f)?;
            write!(f, ")")
        }
        Expr::Integral {
            integrand,
            lower,
            upper,
        } => {
            write!(f, "integrate(")?;
            fmt_expr(integrand.body(), f)?;
            write!(f, ", t, ")?;
            fmt_expr(lower, f)?;
            write!(f, ", ")?;
            fmt_expr(upper, f)?;
            write!(f, ")")
        }
    }
}

fn paren(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => {
            write!(f, "(")?;
            fmt_expr(e, f)?;
            write!(f, ")")
        }
        _ => fmt_expr(e, f),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f)
    }
}

/// A function of `arity` generalized-number variables.
#[derive(Clone, PartialEq, Debug)]
pub struct GenFunc {
    arity: usize,
    body: Expr,
}

impl GenFunc {
    pub fn new(arity: usize, body: Expr) -> GenFunc {
        assert!(
            body.max_var() <= arity,
            "expression uses variables beyond the declared arity"
        );
        GenFunc { arity, body }
    }

    pub fn unary(body: Expr) -> GenFunc {
        GenFunc::new(1.max(body.max_var()), body)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }

    /// Evaluate at a vector of expansions with the given working
    /// truncation (used by builtin Taylor expansion and by division
    /// nodes without their own truncation).
    pub fn eval(&self, args: &[GenNum], work_trunc: &Trunc) -> Result<GenNum> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        eval_expr(&self.body, args, work_trunc)
    }

    /// Symbolic derivative as a new function of the same arity.
    pub fn diff(&self, var: usize) -> Result<GenFunc> {
        Ok(GenFunc {
            arity: self.arity,
            body: self.body.diff(var)?,
        })
    }

    /// Composition `self(g1, ..., gn)` as an expression over the
    /// arguments of the `g_i`.
    pub fn compose(&self, inner: &[GenFunc]) -> GenFunc {
        assert_eq!(inner.len(), self.arity);
        let arity = inner.iter().map(GenFunc::arity).max().unwrap_or(0);
        let subs: Vec<Expr> = inner.iter().map(|g| g.body.clone()).collect();
        GenFunc {
            arity,
            body: self.body.substitute(&subs),
        }
    }

    /// View a one-variable complex function as a function of the real
    /// pair `(x, y)` with `z = x + iy`; conjugation and the real/
    /// imaginary projections are rewritten away.
    pub fn split_complex(&self) -> Result<GenFunc> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: self.arity,
            });
        }
        let i_unit = Expr::Const(GenNum::from_coef(Coef::new(0.0, 1.0)));
        let z = Expr::var(0).add(i_unit.mul(Expr::var(1)));
        let substituted = self.body.substitute(&[z]);
        let body = eliminate_conj(&substituted, false)?;
        Ok(GenFunc { arity: 2, body })
    }
}

impl fmt::Display for GenFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(&self.body, f)
    }
}

/// Rewrite `conj`/`re`/`im` away under the assumption that every
/// variable is real-valued. `under_conj` tracks an outstanding
/// conjugation to push through the tree.
fn eliminate_conj(e: &Expr, under_conj: bool) -> Result<Expr> {
    Ok(match e {
        Expr::Var(i) => Expr::Var(*i),
        Expr::Const(c) => Expr::Const(if under_conj { c.conj() } else { c.clone() }),
        Expr::Add(a, b) => eliminate_conj(a, under_conj)?.add(eliminate_conj(b, under_conj)?),
        Expr::Sub(a, b) => eliminate_conj(a, under_conj)?.sub(eliminate_conj(b, under_conj)?),
        Expr::Mul(a, b) => eliminate_conj(a, under_conj)?.mul(eliminate_conj(b, under_conj)?),
        Expr::Div { num, den, trunc } => Expr::Div {
            num: Box::new(eliminate_conj(num, under_conj)?),
            den: Box::new(eliminate_conj(den, under_conj)?),
            trunc: trunc.clone(),
        },
        Expr::Neg(a) => eliminate_conj(a, under_conj)?.neg(),
        Expr::Pow(a, k) => eliminate_conj(a, under_conj)?.pow(*k),
        Expr::Call(Builtin::Conj, a) => eliminate_conj(a, !under_conj)?,
        Expr::Call(Builtin::Re, a) => {
            let plain = eliminate_conj(a, false)?;
            let conj = eliminate_conj(a, true)?;
            Expr::real(0.5).mul(plain.add(conj))
        }
        Expr::Call(Builtin::Im, a) => {
            let plain = eliminate_conj(a, false)?;
            let conj = eliminate_conj(a, true)?;
            let half_over_i = Expr::Const(GenNum::from_coef(Coef::new(0.0, -0.5)));
            half_over_i.mul(plain.sub(conj))
        }
        // The remaining builtins have real Taylor coefficients, so
        // conjugation commutes with them.
        Expr::Call(b, a) => Expr::call(*b, eliminate_conj(a, under_conj)?),
        Expr::BetaNormSq(_) | Expr::Integral { .. } => {
            return Err(Error::GrammarUnsupported {
                detail: "cannot split this node over real coordinates".into(),
            })
        }
    })
}

fn eval_expr(e: &Expr, args: &[GenNum], work: &Trunc) -> Result<GenNum> {
    match e {
        Expr::Var(i) => Ok(args[*i].clone()),
        Expr::Const(c) => Ok(c.clone()),
        Expr::Add(a, b) => eval_expr(a, args, work)?.checked_add(&eval_expr(b, args, work)?),
        Expr::Sub(a, b) => {
            eval_expr(a, args, work)?.checked_add(&eval_expr(b, args, work)?.negate())
        }
        Expr::Mul(a, b) => eval_expr(a, args, work)?.checked_mul(&eval_expr(b, args, work)?),
        Expr::Div { num, den, trunc } => {
            let n = eval_expr(num, args, work)?;
            let d = eval_expr(den, args, work)?;
            let t = trunc.clone().unwrap_or_else(|| work.clone());
            n.checked_mul(&d.invert(t)?)
        }
        Expr::Neg(a) => Ok(eval_expr(a, args, work)?.negate()),
        Expr::Pow(a, k) => {
            let v = eval_expr(a, args, work)?;
            if *k >= 0 {
                v.pow(*k as u32)
            } else {
                v.pow((-k) as u32)?.invert(work.clone())
            }
        }
        Expr::Call(b, a) => {
            let v = eval_expr(a, args, work)?;
            eval_builtin(*b, &v, work)
        }
        Expr::BetaNormSq(a) => {
            let v = eval_expr(a, args, work)?;
            beta_norm_sq_value(&v)
        }
        Expr::Integral {
            integrand,
            lower,
            upper,
        } => {
            let a = eval_expr(lower, args, work)?;
            let b = eval_expr(upper, args, work)?;
            crate::calculus::integrate(integrand, &a, &b, work)
        }
    }
}

/// `beta_{norm(x)^2} = alpha(2 V(x))`, with `f(0) = 0`.
pub fn beta_norm_sq_value(x: &GenNum) -> Result<GenNum> {
    use crate::gennum::Valuation;
    match x.valuation() {
        Valuation::Known(r) => GenNum::alpha(r.double()),
        Valuation::AtLeast(Trunc::Infinite) => Ok(GenNum::zero()),
        Valuation::AtLeast(Trunc::Finite(_)) => Err(Error::IndeterminateValuation { index: 0 }),
    }
}

fn eval_builtin(b: Builtin, x: &GenNum, work: &Trunc) -> Result<GenNum> {
    match b {
        Builtin::Conj => return Ok(x.conj()),
        Builtin::Re => return Ok(x.re_part()),
        Builtin::Im => return Ok(x.im_part()),
        _ => {}
    }
    let s = x.shadow()?;
    // Smoothness of the classical function at the shadow.
    match b {
        Builtin::Log | Builtin::Sqrt if s.norm() == 0.0 => return Err(Error::NotAssociated),
        _ => {}
    }
    let delta = x - &GenNum::from_coef(s);

    let cap = if work.is_infinite() && !delta.terms().is_empty() {
        Trunc::finite(DEFAULT_TRUNC)
    } else {
        work.clone()
    };
    let t_res = x.trunc().min_with(&cap);

    let mut acc = GenNum::from_coef(derivative_coef(b, s, 0));
    let mut power = GenNum::one().truncate_at(t_res.clone());
    let mut k = 0u32;
    loop {
        k += 1;
        power = power.checked_mul(&delta)?.truncate_at(t_res.clone());
        if power.terms().is_empty() {
            break;
        }
        let dk = derivative_coef(b, s, k);
        acc = acc.checked_add(&power.scale(dk))?;
        if k > 4096 {
            return Err(Error::NonConvergent { depth: k });
        }
    }
    Ok(acc.truncate_at(t_res))
}

/// `f^(k)(s) / k!` for the smooth builtins.
fn derivative_coef(b: Builtin, s: Coef, k: u32) -> Coef {
    let kf = f64::from(k);
    match b {
        Builtin::Exp => {
            let mut c = s.exp();
            for j in 1..=k {
                c /= f64::from(j);
            }
            c
        }
        Builtin::Log => {
            if k == 0 {
                s.ln()
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                Coef::new(sign, 0.0) / (s.powu(k) * kf)
            }
        }
        Builtin::Sin => cycle_coef(s.sin(), s.cos(), k),
        Builtin::Cos => cycle_coef(s.cos(), -s.sin(), k),
        Builtin::Sqrt => {
            // binom(1/2, k) * s^(1/2 - k)
            let mut c = s.sqrt();
            for j in 1..=k {
                c = c * Coef::new((0.5 - f64::from(j - 1)) / f64::from(j), 0.0) / s;
            }
            c
        }
        Builtin::Conj | Builtin::Re | Builtin::Im => unreachable!("handled term-wise"),
    }
}

/// Taylor coefficient for the sine/cosine cycle starting at
/// `(f(s), f'(s)) = (a, b)`.
fn cycle_coef(a: Coef, b: Coef, k: u32) -> Coef {
    let base = match k % 4 {
        0 => a,
        1 => b,
        2 => -a,
        _ => -b,
    };
    let mut c = base;
    for j in 1..=k {
        c /= f64::from(j);
    }
    c
}
