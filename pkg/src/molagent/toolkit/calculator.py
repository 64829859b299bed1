"""Sandboxed arithmetic evaluator realizing the agent's code-execution tool.

Supports float/int literals, + - * / ** with parentheses, variable bindings
(one per line or ';'-separated), tuples, comments, and the functions sqrt,
log, log10, exp, abs, min, max.  The final statement's value is returned and
rendered with Python's shortest round-trip float repr (up to 17 significant
digits).  Nothing else from the host language is reachable.
"""

from __future__ import annotations

import ast
import math


class CalcError(ValueError):
    pass


class CalcSyntaxError(CalcError):
    def __init__(self, message: str, position: int | None = None):
        where = f" (at position {position})" if position is not None else ""
        super().__init__(f"{message}{where}")
        self.position = position


class DivisionByZero(CalcError):
    pass


class UndefinedVariable(CalcError):
    pass


_FUNCTIONS = {
    "sqrt": math.sqrt,
    "log": math.log,
    "log10": math.log10,
    "exp": math.exp,
    "abs": abs,
    "min": min,
    "max": max,
}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}

_MAX_EXPONENT = 1024
_MAX_INT_BITS = 1 << 14


def _eval_node(node: ast.expr, env: dict):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise CalcSyntaxError(f"only numeric literals are allowed, got {node.value!r}",
                                  node.col_offset)
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise UndefinedVariable(f"undefined variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _eval_node(node.operand, env)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left = _eval_node(node.left, env)
        right = _eval_node(node.right, env)
        if isinstance(node.op, ast.Pow):
            if abs(right) > _MAX_EXPONENT:
                raise CalcError(f"exponent {right!r} is too large")
            if isinstance(left, int) and left.bit_length() > _MAX_INT_BITS:
                raise CalcError("operand too large for exponentiation")
        try:
            return _BINOPS[type(node.op)](left, right)
        except ZeroDivisionError:
            raise DivisionByZero("division by zero") from None
        except OverflowError:
            raise CalcError("numeric overflow") from None
    if isinstance(node, ast.Tuple):
        return tuple(_eval_node(el, env) for el in node.elts)
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            name = getattr(node.func, "id", "<expression>")
            raise CalcSyntaxError(f"function {name!r} is not available", node.col_offset)
        if node.keywords:
            raise CalcSyntaxError("keyword arguments are not supported", node.col_offset)
        args = [_eval_node(a, env) for a in node.args]
        try:
            return _FUNCTIONS[node.func.id](*args)
        except ZeroDivisionError:
            raise DivisionByZero("division by zero") from None
        except (ValueError, TypeError, OverflowError) as exc:
            raise CalcError(f"{node.func.id}: {exc}") from None
    raise CalcSyntaxError(
        f"unsupported syntax: {type(node).__name__}", getattr(node, "col_offset", None)
    )


def evaluate_expression(text: str):
    """Evaluate bindings left to right; returns the final statement's value."""
    if not text.strip():
        raise CalcSyntaxError("empty expression", 0)
    try:
        tree = ast.parse(text, mode="exec")
    except SyntaxError as exc:
        raise CalcSyntaxError(exc.msg, exc.offset) from None
    env: dict = {}
    result = None
    have_result = False
    for stmt in tree.body:
        if isinstance(stmt, ast.Assign):
            if len(stmt.targets) != 1 or not isinstance(stmt.targets[0], ast.Name):
                raise CalcSyntaxError("only simple 'name = expression' bindings are allowed",
                                      stmt.col_offset)
            value = _eval_node(stmt.value, env)
            env[stmt.targets[0].id] = value
            result, have_result = value, True
        elif isinstance(stmt, ast.Expr):
            result, have_result = _eval_node(stmt.value, env), True
        else:
            raise CalcSyntaxError(
                f"unsupported statement: {type(stmt).__name__}", stmt.col_offset)
    if not have_result:
        raise CalcSyntaxError("no expression to evaluate", 0)
    return result


def render_result(value) -> str:
    """Full-precision text form of a calculator result."""
    if isinstance(value, tuple):
        if len(value) == 1:
            return f"({render_result(value[0])},)"
        return "(" + ", ".join(render_result(v) for v in value) + ")"
    return repr(value)
