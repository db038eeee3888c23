use super::error::{KResult, KernelError};
use super::signature::{Context, Signature};
use super::term::Term;
use super::types::Type;

/// Infers the unique simple type of `t` under `ctx`.
pub fn typecheck(sig: &Signature, ctx: &Context, t: &Term) -> KResult<Type> {
    let mut bound = Vec::new();
    infer(sig, ctx, &mut bound, t)
}

/// Typechecks `t` and requires it to be a proposition.
pub fn check_prop(sig: &Signature, ctx: &Context, t: &Term) -> KResult<()> {
    let ty = typecheck(sig, ctx, t)?;
    if ty.is_prop() {
        Ok(())
    } else {
        Err(KernelError::TypeMismatch {
            term: t.to_string(),
            expected: Type::Prop,
            found: ty,
        })
    }
}

fn infer(sig: &Signature, ctx: &Context, bound: &mut Vec<Type>, t: &Term) -> KResult<Type> {
    match t {
        Term::Const(c) => sig
            .const_type(c)
            .ok_or_else(|| KernelError::UnknownConst(c.clone())),
        Term::Free(x) => ctx
            .var_type(x)
            .cloned()
            .ok_or_else(|| KernelError::UnknownVar(x.clone())),
        Term::Bound(i) => {
            let i = *i as usize;
            if i < bound.len() {
                Ok(bound[bound.len() - 1 - i].clone())
            } else {
                Err(KernelError::LooseBound(i as u32))
            }
        }
        Term::App(f, a) => {
            let fty = infer(sig, ctx, bound, f)?;
            let aty = infer(sig, ctx, bound, a)?;
            match fty {
                Type::Arrow(dom, cod) => {
                    if *dom == aty {
                        Ok((*cod).clone())
                    } else {
                        Err(KernelError::TypeMismatch {
                            term: t.to_string(),
                            expected: (*dom).clone(),
                            found: aty,
                        })
                    }
                }
                ty => Err(KernelError::NotAFunction {
                    term: f.to_string(),
                    ty,
                }),
            }
        }
        Term::Lam(b, body) => {
            bound.push(b.ty.clone());
            let r = infer(sig, ctx, bound, body);
            bound.pop();
            Ok(Type::arrow(b.ty.clone(), r?))
        }
        Term::Imp(a, b) => {
            for part in [a, b] {
                let ty = infer(sig, ctx, bound, part)?;
                if !ty.is_prop() {
                    return Err(KernelError::NonPropQuantBody(t.to_string()));
                }
            }
            Ok(Type::Prop)
        }
        Term::All(b, body) => {
            bound.push(b.ty.clone());
            let r = infer(sig, ctx, bound, body);
            bound.pop();
            if r?.is_prop() {
                Ok(Type::Prop)
            } else {
                Err(KernelError::NonPropQuantBody(t.to_string()))
            }
        }
    }
}
