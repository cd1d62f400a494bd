//! Built-in functions available to code and predicates.

use crate::lang::Type;
use crate::value::Value;

const NAMES: [&str; 4] = ["scasize", "scalpha", "scnum", "scblank"];

pub fn is_builtin(name: &str) -> bool {
    NAMES.contains(&name)
}

/// Parameter and return types of a built-in.
pub fn builtin_signature(name: &str) -> Option<(&'static [Type], Type)> {
    match name {
        "scasize" => Some((&[Type::IntArray], Type::Int)),
        "scalpha" | "scnum" | "scblank" => Some((&[Type::Int], Type::Bool)),
        _ => None,
    }
}

/// Applies a built-in. `Err` carries a description of a type or arity
/// mismatch; callers turn it into a fault.
pub fn call_builtin(name: &str, args: &[Value]) -> Result<Value, String> {
    match (name, args) {
        ("scasize", [Value::Arr(a)]) => Ok(Value::Int(a.len() as i64)),
        ("scalpha", [Value::Int(c)]) => Ok(Value::Bool(as_ascii(*c).is_some_and(|c| c.is_ascii_alphabetic()))),
        ("scnum", [Value::Int(c)]) => Ok(Value::Bool(as_ascii(*c).is_some_and(|c| c.is_ascii_digit()))),
        ("scblank", [Value::Int(c)]) => Ok(Value::Bool(*c == 32)),
        _ if is_builtin(name) => Err(format!(
            "`{name}` applied to ({})",
            args.iter().map(|a| a.ty().to_string()).collect::<Vec<_>>().join(", ")
        )),
        _ => Err(format!("`{name}` is not a built-in")),
    }
}

fn as_ascii(c: i64) -> Option<u8> {
    u8::try_from(c).ok().filter(u8::is_ascii)
}
