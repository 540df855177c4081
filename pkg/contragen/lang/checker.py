"""
Static checks over a parsed subject program.

The checker enforces name uniqueness, resolves every referenced type and
types method bodies. It never rewrites the tree.
"""
from typing import Dict, Optional, Sequence

from . import ast
from .errors import DuplicateNameError, Position, SubjectTypeError, UnresolvedTypeError

STRING = "string"


def _duplicates(names: Sequence[str]) -> Optional[str]:
    seen = set()
    for name in names:
        if name in seen:
            return name
        seen.add(name)
    return None


class ProgramChecker:
    """
    Validates one SubjectProgram.

    Raises the first diagnostic found; subject sources are small enough that
    one error at a time is what users want.
    """

    def __init__(self, program: ast.SubjectProgram):
        self.program = program
        self.exceptions = program.exception_names()
        self._unit: Optional[ast.UnitDecl] = None
        self._method: Optional[ast.MethodDecl] = None

    def check(self) -> None:
        self._check_names()
        self._check_declared_types()
        for unit in self.program.units:
            self._unit = unit
            for method in list(unit.constructors) + list(unit.methods):
                self._method = method
                self._check_method(method)

    # -- declarations ------------------------------------------------------

    def _check_names(self) -> None:
        program = self.program
        unit_names = [u.name for u in program.units]
        clash = _duplicates(unit_names)
        if clash:
            unit = [u for u in program.units if u.name == clash][-1]
            raise DuplicateNameError(f"Duplicate unit name '{clash}'", unit.pos)

        exception_names = [e.name for e in program.exceptions]
        clash = _duplicates(exception_names + list(program.builtin_exceptions))
        if clash:
            decl = [e for e in program.exceptions if e.name == clash][-1]
            raise DuplicateNameError(f"Duplicate exception name '{clash}'", decl.pos)
        for decl in program.exceptions:
            if decl.name in unit_names or decl.name in ast.BUILTIN_TYPES:
                raise DuplicateNameError(f"Exception '{decl.name}' clashes with a type name", decl.pos)

        for unit in program.units:
            if unit.name in ast.BUILTIN_TYPES:
                raise DuplicateNameError(f"Unit name '{unit.name}' is reserved", unit.pos)
            if len(unit.constructors) > 1:
                raise DuplicateNameError(
                    f"Unit '{unit.name}' declares more than one constructor", unit.constructors[1].pos
                )
            members = [f.name for f in unit.fields] + [m.name for m in unit.methods]
            clash = _duplicates(members)
            if clash:
                raise DuplicateNameError(f"Duplicate member '{clash}' in unit '{unit.name}'", unit.pos)
            for method in list(unit.constructors) + list(unit.methods):
                clash = _duplicates([p.name for p in method.params])
                if clash:
                    raise DuplicateNameError(
                        f"Duplicate parameter '{clash}' in {method.method_id}", method.pos
                    )

    def _resolve(self, type_name: str, pos: Position, allow_void: bool = False) -> None:
        if type_name in ast.BUILTIN_TYPES or self.program.is_unit(type_name):
            return
        if allow_void and type_name == ast.VOID:
            return
        raise UnresolvedTypeError(f"Unknown type '{type_name}'", pos)

    def _resolve_exception(self, name: str, pos: Position) -> None:
        if name not in self.exceptions:
            raise UnresolvedTypeError(f"Unknown exception '{name}'", pos)

    def _check_declared_types(self) -> None:
        for decl in self.program.exceptions:
            if decl.parent is not None:
                self._resolve_exception(decl.parent, decl.pos)
        for unit in self.program.units:
            for f in unit.fields:
                self._resolve(f.type_name, f.pos)
            for method in list(unit.constructors) + list(unit.methods):
                self._resolve(method.return_type, method.pos, allow_void=True)
                for param in method.params:
                    self._resolve(param.type_name, param.pos)
                for name in method.declared_throws:
                    self._resolve_exception(name, method.pos)

    # -- bodies ------------------------------------------------------------

    def _check_method(self, method: ast.MethodDecl) -> None:
        scope = {p.name: p.type_name for p in method.params}
        self._check_stmt(method.body, scope)

    def _check_stmt(self, stmt: ast.Stmt, scope: Dict[str, str]) -> None:
        if isinstance(stmt, ast.Block):
            inner = dict(scope)
            for child in stmt.body:
                self._check_stmt(child, inner)
        elif isinstance(stmt, ast.VarDecl):
            self._resolve(stmt.type_name, stmt.pos)
            if stmt.init is not None:
                self._expect_assignable(self._type_of(stmt.init, scope), stmt.type_name, stmt.pos)
            scope[stmt.name] = stmt.type_name
        elif isinstance(stmt, ast.Assign):
            target_type = self._type_of(stmt.target, scope)
            self._expect_assignable(self._type_of(stmt.value, scope), target_type, stmt.pos)
        elif isinstance(stmt, ast.If):
            self._expect_assignable(self._type_of(stmt.cond, scope), ast.BOOL, stmt.pos)
            self._check_stmt(stmt.then, dict(scope))
            if stmt.orelse is not None:
                self._check_stmt(stmt.orelse, dict(scope))
        elif isinstance(stmt, ast.While):
            self._expect_assignable(self._type_of(stmt.cond, scope), ast.BOOL, stmt.pos)
            self._check_stmt(stmt.body, dict(scope))
        elif isinstance(stmt, ast.Return):
            expected = self._method.return_type
            if stmt.value is None:
                if expected != ast.VOID:
                    raise SubjectTypeError(f"Missing return value in {self._method.method_id}", stmt.pos)
            else:
                if expected == ast.VOID:
                    raise SubjectTypeError(f"Unexpected return value in {self._method.method_id}", stmt.pos)
                self._expect_assignable(self._type_of(stmt.value, scope), expected, stmt.pos)
        elif isinstance(stmt, ast.Throw):
            self._resolve_exception(stmt.exception, stmt.pos)
        elif isinstance(stmt, ast.ExprStmt):
            self._type_of(stmt.expr, scope)

    def _expect_assignable(self, source: str, target: str, pos: Position) -> None:
        if not ast.assignable(source, target):
            raise SubjectTypeError(f"Expected {target} but found {source}", pos)

    def _type_of(self, expr: ast.Expr, scope: Dict[str, str]) -> str:
        if isinstance(expr, ast.IntLit):
            return ast.INT
        if isinstance(expr, ast.BoolLit):
            return ast.BOOL
        if isinstance(expr, ast.NullLit):
            return ast.NULL
        if isinstance(expr, ast.StrLit):
            return STRING
        if isinstance(expr, ast.This):
            return self._unit.name
        if isinstance(expr, ast.Name):
            if expr.ident in scope:
                return scope[expr.ident]
            field_type = self._unit.field_type(expr.ident)
            if field_type is None:
                raise SubjectTypeError(f"Unknown identifier '{expr.ident}'", expr.pos)
            return field_type
        if isinstance(expr, ast.FieldAccess):
            owner = self._type_of(expr.target, scope)
            unit = self.program.unit(owner)
            field_type = unit.field_type(expr.name) if unit else None
            if field_type is None:
                raise SubjectTypeError(f"Type {owner} has no field '{expr.name}'", expr.pos)
            return field_type
        if isinstance(expr, ast.New):
            return self._type_of_new(expr, scope)
        if isinstance(expr, ast.Call):
            return self._type_of_call(expr, scope)
        if isinstance(expr, ast.Unary):
            operand = self._type_of(expr.operand, scope)
            expected = ast.INT if expr.op == "-" else ast.BOOL
            self._expect_assignable(operand, expected, expr.pos)
            return expected
        if isinstance(expr, ast.Binary):
            return self._type_of_binary(expr, scope)
        raise SubjectTypeError(f"Unsupported expression {type(expr).__name__}", expr.pos)

    def _type_of_binary(self, expr: ast.Binary, scope: Dict[str, str]) -> str:
        left = self._type_of(expr.left, scope)
        right = self._type_of(expr.right, scope)
        if expr.op in ("+", "-", "*", "/", "%"):
            self._expect_assignable(left, ast.INT, expr.pos)
            self._expect_assignable(right, ast.INT, expr.pos)
            return ast.INT
        if expr.op in ("<", "<=", ">", ">="):
            self._expect_assignable(left, ast.INT, expr.pos)
            self._expect_assignable(right, ast.INT, expr.pos)
            return ast.BOOL
        if expr.op in ("&&", "||"):
            self._expect_assignable(left, ast.BOOL, expr.pos)
            self._expect_assignable(right, ast.BOOL, expr.pos)
            return ast.BOOL
        if not (ast.assignable(left, right) or ast.assignable(right, left)):
            raise SubjectTypeError(f"Cannot compare {left} with {right}", expr.pos)
        return ast.BOOL

    def _check_args(
        self, owner: str, params: Sequence[str], args: Sequence[ast.Expr], scope: Dict[str, str], pos: Position
    ) -> None:
        if len(params) != len(args):
            raise SubjectTypeError(f"{owner} expects {len(params)} argument(s), got {len(args)}", pos)
        for param_type, arg in zip(params, args):
            arg_type = self._type_of(arg, scope)
            if arg_type == STRING:
                raise SubjectTypeError("String literals are only allowed in log()", arg.pos)
            self._expect_assignable(arg_type, param_type, arg.pos)

    def _type_of_new(self, expr: ast.New, scope: Dict[str, str]) -> str:
        if expr.type_name == ast.LIST:
            self._check_args("new list", (), expr.args, scope, expr.pos)
            return ast.LIST
        unit = self.program.unit(expr.type_name)
        if unit is None:
            raise UnresolvedTypeError(f"Unknown type '{expr.type_name}'", expr.pos)
        ctor = unit.constructor()
        params = ctor.param_types if ctor else ()
        self._check_args(f"new {unit.name}", params, expr.args, scope, expr.pos)
        return unit.name

    def _type_of_call(self, expr: ast.Call, scope: Dict[str, str]) -> str:
        if expr.target is None:
            if expr.name == "log":
                if len(expr.args) != 1 or not isinstance(expr.args[0], ast.StrLit):
                    raise SubjectTypeError("log() takes one string literal", expr.pos)
                return ast.VOID
            owner = self._unit
        else:
            owner_type = self._type_of(expr.target, scope)
            if owner_type == ast.LIST:
                signature = ast.LIST_METHODS.get(expr.name)
                if signature is None:
                    raise SubjectTypeError(f"list has no method '{expr.name}'", expr.pos)
                self._check_args(f"list.{expr.name}", signature[0], expr.args, scope, expr.pos)
                return signature[1]
            owner = self.program.unit(owner_type)
            if owner is None:
                raise SubjectTypeError(f"Type {owner_type} has no methods", expr.pos)
        method = owner.method(expr.name)
        if method is None:
            raise SubjectTypeError(f"Unit {owner.name} has no method '{expr.name}'", expr.pos)
        self._check_args(method.method_id, method.param_types, expr.args, scope, expr.pos)
        return method.return_type


def check_program(program: ast.SubjectProgram) -> None:
    """
    Run all static checks.

    Args:
        program: Freshly parsed program

    Raises:
        DuplicateNameError, UnresolvedTypeError, SubjectTypeError
    """
    ProgramChecker(program).check()
