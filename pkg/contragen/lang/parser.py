"""
Recursive-descent parser for the subject language.
"""
from typing import List, Optional, Tuple

from . import ast
from .checker import check_program
from .doccomment import parse_doc_comment
from .errors import Position, SubjectSyntaxError
from .lexer import Token, tokenize

_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


class Parser:
    """
    Builds a SubjectProgram from a token stream.

    Branch points (`if`/`while`) get ids `Unit.method#k`, numbered in
    source order within their method.
    """

    def __init__(self, tokens: List[Token], source_name: str = "<source>"):
        self.tokens = tokens
        self.index = 0
        self.source_name = source_name
        self._unit = ""
        self._method = ""
        self._branches: List[str] = []

    # -- token helpers -----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def _check(self, text: str) -> bool:
        token = self.current
        return token.kind in ("OP", "KEYWORD") and token.text == text

    def _accept(self, text: str) -> bool:
        if self._check(text):
            self._advance()
            return True
        return False

    def _expect(self, text: str) -> Token:
        if not self._check(text):
            found = self.current.text or "end of input"
            raise SubjectSyntaxError(f"Expected '{text}' but found '{found}'", self.current.pos)
        return self._advance()

    def _expect_ident(self, what: str = "identifier") -> Token:
        token = self.current
        if token.kind != "IDENT":
            found = token.text or "end of input"
            raise SubjectSyntaxError(f"Expected {what} but found '{found}'", token.pos)
        return self._advance()

    # -- declarations ------------------------------------------------------

    def parse_program(self) -> ast.SubjectProgram:
        units: List[ast.UnitDecl] = []
        exceptions: List[ast.ExceptionDecl] = []
        while self.current.kind != "EOF":
            doc = self._take_doc()
            if self._check("exception"):
                exceptions.append(self._parse_exception())
            elif self._check("class"):
                units.append(self._parse_unit())
            elif doc is not None and self.current.kind == "EOF":
                break
            else:
                raise SubjectSyntaxError(
                    f"Expected 'class' or 'exception' but found '{self.current.text}'", self.current.pos
                )
        return ast.SubjectProgram(
            units=tuple(units), exceptions=tuple(exceptions), source_name=self.source_name
        )

    def _take_doc(self) -> Optional[ast.DocComment]:
        doc = None
        while self.current.kind == "DOC":
            token = self._advance()
            doc = parse_doc_comment(token.text, token.pos)
        return doc

    def _parse_exception(self) -> ast.ExceptionDecl:
        start = self._expect("exception").pos
        name = self._expect_ident("exception name").text
        parent = None
        if self._accept("extends"):
            parent = self._expect_ident("exception name").text
        self._expect(";")
        return ast.ExceptionDecl(name=name, parent=parent, pos=start)

    def _parse_unit(self) -> ast.UnitDecl:
        start = self._expect("class").pos
        name = self._expect_ident("class name").text
        self._unit = name
        self._expect("{")
        fields: List[ast.FieldDecl] = []
        constructors: List[ast.MethodDecl] = []
        methods: List[ast.MethodDecl] = []
        while not self._check("}"):
            if self.current.kind == "EOF":
                raise SubjectSyntaxError(f"Unterminated class {name}", start)
            doc = self._take_doc()
            if self._check("}"):
                break
            first = self._expect_ident("member declaration")
            if first.text == name and self._check("("):
                constructors.append(self._parse_callable(name, name, ast.VOID, doc, first.pos, True))
                continue
            member = self._expect_ident("member name")
            if self._accept(";"):
                fields.append(ast.FieldDecl(name=member.text, type_name=first.text, pos=member.pos))
            else:
                methods.append(self._parse_callable(name, member.text, first.text, doc, member.pos, False))
        self._expect("}")
        return ast.UnitDecl(
            name=name,
            fields=tuple(fields),
            constructors=tuple(constructors),
            methods=tuple(methods),
            pos=start,
        )

    def _parse_callable(
        self,
        unit: str,
        name: str,
        return_type: str,
        doc: Optional[ast.DocComment],
        pos: Position,
        is_constructor: bool,
    ) -> ast.MethodDecl:
        self._method = name
        self._branches = []
        self._expect("(")
        params: List[ast.Param] = []
        if not self._check(")"):
            while True:
                type_token = self._expect_ident("parameter type")
                name_token = self._expect_ident("parameter name")
                params.append(ast.Param(name=name_token.text, type_name=type_token.text, pos=name_token.pos))
                if not self._accept(","):
                    break
        self._expect(")")
        throws: List[str] = []
        if self._accept("throws"):
            throws.append(self._expect_ident("exception name").text)
            while self._accept(","):
                throws.append(self._expect_ident("exception name").text)
        body = self._parse_block()
        return ast.MethodDecl(
            name=name,
            unit=unit,
            params=tuple(params),
            return_type=return_type,
            body=body,
            doc=doc,
            declared_throws=tuple(throws),
            is_constructor=is_constructor,
            pos=pos,
            branch_ids=tuple(self._branches),
        )

    # -- statements --------------------------------------------------------

    def _new_branch(self) -> str:
        branch_id = f"{self._unit}.{self._method}#{len(self._branches)}"
        self._branches.append(branch_id)
        return branch_id

    def _parse_block(self) -> ast.Block:
        start = self._expect("{").pos
        body: List[ast.Stmt] = []
        while not self._check("}"):
            if self.current.kind == "EOF":
                raise SubjectSyntaxError("Unterminated block", start)
            if self.current.kind == "DOC":
                self._advance()
                continue
            body.append(self._parse_statement())
        self._expect("}")
        return ast.Block(pos=start, body=tuple(body))

    def _parse_statement(self) -> ast.Stmt:
        token = self.current
        if self._check("{"):
            return self._parse_block()
        if self._accept("if"):
            branch_id = self._new_branch()
            self._expect("(")
            cond = self._parse_expr()
            self._expect(")")
            then = self._parse_statement()
            orelse = self._parse_statement() if self._accept("else") else None
            return ast.If(pos=token.pos, branch_id=branch_id, cond=cond, then=then, orelse=orelse)
        if self._accept("while"):
            branch_id = self._new_branch()
            self._expect("(")
            cond = self._parse_expr()
            self._expect(")")
            return ast.While(pos=token.pos, branch_id=branch_id, cond=cond, body=self._parse_statement())
        if self._accept("return"):
            value = None if self._check(";") else self._parse_expr()
            self._expect(";")
            return ast.Return(pos=token.pos, value=value)
        if self._accept("throw"):
            self._expect("new")
            name = self._expect_ident("exception name").text
            self._expect("(")
            self._expect(")")
            self._expect(";")
            return ast.Throw(pos=token.pos, exception=name)
        if token.kind == "IDENT" and self._peek().kind == "IDENT":
            type_name = self._advance().text
            name = self._advance().text
            init = self._parse_expr() if self._accept("=") else None
            self._expect(";")
            return ast.VarDecl(pos=token.pos, type_name=type_name, name=name, init=init)
        expr = self._parse_expr()
        if self._accept("="):
            if not isinstance(expr, (ast.Name, ast.FieldAccess)):
                raise SubjectSyntaxError("Invalid assignment target", token.pos)
            value = self._parse_expr()
            self._expect(";")
            return ast.Assign(pos=token.pos, target=expr, value=value)
        self._expect(";")
        return ast.ExprStmt(pos=token.pos, expr=expr)

    # -- expressions -------------------------------------------------------

    def _parse_expr(self, level: int = 0) -> ast.Expr:
        if level == len(_BINARY_LEVELS):
            return self._parse_unary()
        left = self._parse_expr(level + 1)
        while self.current.kind == "OP" and self.current.text in _BINARY_LEVELS[level]:
            op_token = self._advance()
            right = self._parse_expr(level + 1)
            left = ast.Binary(pos=op_token.pos, op=op_token.text, left=left, right=right)
        return left

    def _parse_unary(self) -> ast.Expr:
        token = self.current
        if token.kind == "OP" and token.text in ("!", "-"):
            self._advance()
            operand = self._parse_unary()
            if token.text == "-" and isinstance(operand, ast.IntLit):
                return ast.IntLit(pos=token.pos, value=-operand.value)
            return ast.Unary(pos=token.pos, op=token.text, operand=operand)
        return self._parse_postfix()

    def _parse_args(self) -> Tuple[ast.Expr, ...]:
        self._expect("(")
        args: List[ast.Expr] = []
        if not self._check(")"):
            args.append(self._parse_expr())
            while self._accept(","):
                args.append(self._parse_expr())
        self._expect(")")
        return tuple(args)

    def _parse_postfix(self) -> ast.Expr:
        expr = self._parse_primary()
        while self._check("."):
            self._advance()
            name = self._expect_ident("member name")
            if self._check("("):
                expr = ast.Call(pos=name.pos, target=expr, name=name.text, args=self._parse_args())
            else:
                expr = ast.FieldAccess(pos=name.pos, target=expr, name=name.text)
        return expr

    def _parse_primary(self) -> ast.Expr:
        token = self.current
        if token.kind == "INT":
            self._advance()
            return ast.IntLit(pos=token.pos, value=int(token.text))
        if token.kind == "STRING":
            self._advance()
            return ast.StrLit(pos=token.pos, value=token.text[1:-1])
        if self._accept("true"):
            return ast.BoolLit(pos=token.pos, value=True)
        if self._accept("false"):
            return ast.BoolLit(pos=token.pos, value=False)
        if self._accept("null"):
            return ast.NullLit(pos=token.pos)
        if self._accept("this"):
            return ast.This(pos=token.pos)
        if self._accept("new"):
            type_name = self._expect_ident("type name").text
            return ast.New(pos=token.pos, type_name=type_name, args=self._parse_args())
        if self._accept("("):
            expr = self._parse_expr()
            self._expect(")")
            return expr
        if token.kind == "IDENT":
            self._advance()
            if self._check("("):
                return ast.Call(pos=token.pos, target=None, name=token.text, args=self._parse_args())
            return ast.Name(pos=token.pos, ident=token.text)
        found = token.text or "end of input"
        raise SubjectSyntaxError(f"Unexpected '{found}' in expression", token.pos)


def parse_program(source: str, source_name: str = "<source>") -> ast.SubjectProgram:
    """
    Parse and check subject source text.

    Args:
        source: Source text of a `.sub` file
        source_name: Name used in diagnostics

    Returns:
        The checked SubjectProgram with raw doc comments attached

    Raises:
        SubjectSyntaxError: On grammar violations
        DuplicateNameError: On clashing unit, member or parameter names
        UnresolvedTypeError: On references to unknown types
        SubjectTypeError: On ill-typed method bodies
    """
    program = Parser(tokenize(source), source_name).parse_program()
    check_program(program)
    return program


def parse_file(path: str) -> ast.SubjectProgram:
    """
    Parse a `.sub` file from disk.

    Args:
        path: Path to the source file

    Returns:
        The checked SubjectProgram
    """
    with open(path, "r", encoding="utf-8") as f:
        return parse_program(f.read(), source_name=path)
