"""Recursive descent parser for `.imp` sources.

Grammar (C precedence for expressions):

    program   := (const | gate | global | func)* EOF
    const     := 'const' IDENT '=' ['-'] INT ';'
    gate      := 'gate' IDENT (',' IDENT)* ';'
    global    := 'int' IDENT ['[' expr ']'] ['=' expr] ';'
    func      := 'func' IDENT '(' ['int' IDENT (',' 'int' IDENT)*] ')' block
    stmt      := 'int' IDENT ['=' rhs] ';' | target '=' rhs ';' | IDENT '(' args ')' ';'
               | 'if' '(' expr ')' body ['else' (if | body)] | 'while' '(' expr ')' body
               | 'for' '(' [simple] ';' expr ';' [simple] ')' body | 'return' [expr] ';'
               | 'assert' '(' expr ')' ';' | 'assume' '(' expr ')' ';' | 'log' '(' STRING ')' ';'
    rhs       := 'havoc' '(' ')' | IDENT '(' args ')' | expr
"""

import logging
from pathlib import Path
from typing import List, Mapping, Optional

from swarm_bmc.errors import ParseError
from swarm_bmc.frontend.lexer import Lexer, Token, TokenType
from swarm_bmc.frontend.syntax import (
    Assert, Assign, Assume, Binary, BoolLit, Call, Decl, Expr, For, FunctionDef, Havoc, If, Index,
    IntLit, Log, Program, Return, SourceLocation, Stmt, Unary, Var, VarDecl, While,
)

logger = logging.getLogger(__name__)

# binary operator levels, loosest first
PRECEDENCE = [
    [TokenType.OR],
    [TokenType.AND],
    [TokenType.EQ, TokenType.NE],
    [TokenType.LT, TokenType.LE, TokenType.GT, TokenType.GE],
    [TokenType.PLUS, TokenType.MINUS],
    [TokenType.STAR, TokenType.SLASH, TokenType.PERCENT],
]


class Parser:
    """Recursive descent parser producing a Program"""
    def __init__(self, tokens: List[Token], path: Optional[str] = None,
                 defines: Optional[Mapping[str, int]] = None):
        self.tokens = tokens
        self.path = path
        self.position = 0
        self.current_token = self.tokens[0]
        self.defines = dict(defines or {})
        self.constants: dict[str, int] = dict(self.defines)
        self.declared_constants: set[str] = set()
        self.source_map: dict[int, SourceLocation] = {}
        self.next_id = 1

    def error(self, msg: str, expected: Optional[str] = None, token: Optional[Token] = None) -> ParseError:
        token = token or self.current_token
        return ParseError(msg, token.line, token.column, expected=expected, path=self.path)

    def advance(self) -> Token:
        """Move to next token"""
        token = self.current_token
        if self.position < len(self.tokens) - 1:
            self.position += 1
            self.current_token = self.tokens[self.position]
        return token

    def peek(self, offset: int = 1) -> Token:
        index = min(self.position + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def at(self, *types: TokenType) -> bool:
        return self.current_token.type in types

    def expect(self, token_type: TokenType) -> Token:
        """Consume expected token type or raise error"""
        if self.current_token.type == token_type:
            return self.advance()
        found = self.current_token.value if self.current_token.type != TokenType.EOF else "end of input"
        raise self.error(f"unexpected {found!r}", expected=repr(token_type.value))

    def fresh_id(self, token: Token) -> int:
        sid = self.next_id
        self.next_id += 1
        self.source_map[sid] = SourceLocation(self.path or "<input>", token.line, token.column)
        return sid

    def check_not_constant(self, token: Token):
        if token.value in self.constants:
            raise self.error(f"'{token.value}' is a constant", token=token)

    # top level

    def parse(self) -> Program:
        functions: list[FunctionDef] = []
        globals_: list[VarDecl] = []
        gate: list[str] = []
        while not self.at(TokenType.EOF):
            if self.at(TokenType.KW_CONST):
                self.parse_const()
            elif self.at(TokenType.KW_GATE):
                self.advance()
                gate.append(self.expect(TokenType.IDENT).value)
                while self.at(TokenType.COMMA):
                    self.advance()
                    gate.append(self.expect(TokenType.IDENT).value)
                self.expect(TokenType.SEMI)
            elif self.at(TokenType.KW_INT):
                globals_.append(self.parse_global())
            elif self.at(TokenType.KW_FUNC):
                functions.append(self.parse_function())
            else:
                raise self.error(f"unexpected {self.current_token.value!r}",
                                 expected="'const', 'int' or 'func'")
        return Program(
            functions=tuple(functions),
            globals=tuple(globals_),
            source_map=self.source_map,
            constants=dict(self.constants),
            assert_gate=tuple(gate),
            path=self.path or "<input>",
        )

    def parse_const(self):
        self.expect(TokenType.KW_CONST)
        name_token = self.expect(TokenType.IDENT)
        name = name_token.value
        if name in self.declared_constants:
            raise self.error(f"constant '{name}' redeclared", token=name_token)
        self.expect(TokenType.ASSIGN)
        negative = False
        if self.at(TokenType.MINUS):
            self.advance()
            negative = True
        value = self.expect(TokenType.INT).value
        self.expect(TokenType.SEMI)
        self.declared_constants.add(name)
        if name in self.defines:
            logger.debug("constant %s overridden: %d", name, self.defines[name])
        else:
            self.constants[name] = -value if negative else value

    def parse_global(self) -> VarDecl:
        start = self.expect(TokenType.KW_INT)
        name_token = self.expect(TokenType.IDENT)
        self.check_not_constant(name_token)
        size = init = None
        if self.at(TokenType.LBRACKET):
            self.advance()
            size = self.parse_expression()
            self.expect(TokenType.RBRACKET)
        elif self.at(TokenType.ASSIGN):
            self.advance()
            init = self.parse_expression()
        self.expect(TokenType.SEMI)
        return VarDecl(name_token.value, size, init, id=self.fresh_id(start))

    def parse_function(self) -> FunctionDef:
        start = self.expect(TokenType.KW_FUNC)
        name = self.expect(TokenType.IDENT).value
        sid = self.fresh_id(start)
        self.expect(TokenType.LPAREN)
        params = []
        if not self.at(TokenType.RPAREN):
            while True:
                self.expect(TokenType.KW_INT)
                param = self.expect(TokenType.IDENT)
                self.check_not_constant(param)
                params.append(param.value)
                if not self.at(TokenType.COMMA):
                    break
                self.advance()
        self.expect(TokenType.RPAREN)
        body = self.parse_block()
        return FunctionDef(name, tuple(params), body, id=sid)

    # statements

    def parse_block(self) -> tuple[Stmt, ...]:
        self.expect(TokenType.LBRACE)
        stmts: list[Stmt] = []
        while not self.at(TokenType.RBRACE):
            if self.at(TokenType.EOF):
                raise self.error("unexpected end of input", expected="'}'")
            stmts.extend(self.parse_statement())
        self.expect(TokenType.RBRACE)
        return tuple(stmts)

    def parse_body(self) -> tuple[Stmt, ...]:
        if self.at(TokenType.LBRACE):
            return self.parse_block()
        return tuple(self.parse_statement())

    def parse_statement(self) -> list[Stmt]:
        token = self.current_token
        match token.type:
            case TokenType.KW_INT:
                stmts = self.parse_declaration()
                self.expect(TokenType.SEMI)
                return stmts
            case TokenType.KW_IF:
                return [self.parse_if()]
            case TokenType.KW_WHILE:
                self.advance()
                self.expect(TokenType.LPAREN)
                cond = self.parse_expression()
                self.expect(TokenType.RPAREN)
                sid = self.fresh_id(token)
                return [While(cond, self.parse_body(), id=sid)]
            case TokenType.KW_FOR:
                return [self.parse_for()]
            case TokenType.KW_RETURN:
                self.advance()
                value = None if self.at(TokenType.SEMI) else self.parse_expression()
                self.expect(TokenType.SEMI)
                return [Return(value, id=self.fresh_id(token))]
            case TokenType.KW_ASSERT | TokenType.KW_ASSUME:
                self.advance()
                self.expect(TokenType.LPAREN)
                cond = self.parse_expression()
                self.expect(TokenType.RPAREN)
                self.expect(TokenType.SEMI)
                node = Assert if token.type == TokenType.KW_ASSERT else Assume
                return [node(cond, id=self.fresh_id(token))]
            case TokenType.KW_LOG:
                self.advance()
                self.expect(TokenType.LPAREN)
                label = self.expect(TokenType.STRING)
                if label.value == "":
                    raise self.error("log label must not be empty", token=label)
                self.expect(TokenType.RPAREN)
                self.expect(TokenType.SEMI)
                return [Log(label.value, id=self.fresh_id(token))]
            case TokenType.IDENT:
                stmts = self.parse_simple()
                self.expect(TokenType.SEMI)
                return stmts
            case TokenType.EOF:
                raise self.error("unexpected end of input", expected="statement")
        raise self.error(f"unexpected {token.value!r}", expected="statement")

    def parse_declaration(self) -> list[Stmt]:
        start = self.expect(TokenType.KW_INT)
        name_token = self.expect(TokenType.IDENT)
        self.check_not_constant(name_token)
        name = name_token.value
        if self.at(TokenType.LBRACKET):
            raise self.error("arrays must be declared at top level")
        decl_id = self.fresh_id(start)
        if not self.at(TokenType.ASSIGN):
            return [Decl(name, id=decl_id)]
        self.advance()
        rhs = self.parse_rhs(name, name_token)
        if isinstance(rhs, Expr):
            return [Decl(name, rhs, id=decl_id)]
        return [Decl(name, id=decl_id), rhs]

    def parse_simple(self) -> list[Stmt]:
        """Assignment or call statement, without the trailing ';'"""
        name_token = self.expect(TokenType.IDENT)
        if self.at(TokenType.LPAREN):
            return [self.parse_call(name_token, None)]
        self.check_not_constant(name_token)
        target: Var | Index = Var(name_token.value)
        if self.at(TokenType.LBRACKET):
            self.advance()
            target = Index(name_token.value, self.parse_expression())
            self.expect(TokenType.RBRACKET)
        self.expect(TokenType.ASSIGN)
        if isinstance(target, Index) and self.at(TokenType.KW_HAVOC, TokenType.IDENT) \
                and self.peek().type == TokenType.LPAREN:
            raise self.error("havoc() and calls can only be assigned to a scalar variable")
        rhs = self.parse_rhs(name_token.value, name_token)
        if isinstance(rhs, Expr):
            return [Assign(target, rhs, id=self.fresh_id(name_token))]
        return [rhs]

    def parse_rhs(self, target: str, token: Token) -> Expr | Stmt:
        if self.at(TokenType.KW_HAVOC):
            self.advance()
            self.expect(TokenType.LPAREN)
            self.expect(TokenType.RPAREN)
            return Havoc(target, id=self.fresh_id(token))
        if self.at(TokenType.IDENT) and self.peek().type == TokenType.LPAREN:
            return self.parse_call(self.advance(), target)
        return self.parse_expression()

    def parse_call(self, name_token: Token, target: Optional[str]) -> Call:
        sid = self.fresh_id(name_token)
        self.expect(TokenType.LPAREN)
        args = []
        if not self.at(TokenType.RPAREN):
            args.append(self.parse_expression())
            while self.at(TokenType.COMMA):
                self.advance()
                args.append(self.parse_expression())
        self.expect(TokenType.RPAREN)
        return Call(name_token.value, tuple(args), target, id=sid)

    def parse_if(self) -> If:
        start = self.expect(TokenType.KW_IF)
        self.expect(TokenType.LPAREN)
        cond = self.parse_expression()
        self.expect(TokenType.RPAREN)
        sid = self.fresh_id(start)
        then = self.parse_body()
        orelse: tuple[Stmt, ...] = ()
        if self.at(TokenType.KW_ELSE):
            self.advance()
            if self.at(TokenType.KW_IF):
                orelse = (self.parse_if(),)
            else:
                orelse = self.parse_body()
        return If(cond, then, orelse, id=sid)

    def parse_for(self) -> For:
        start = self.expect(TokenType.KW_FOR)
        self.expect(TokenType.LPAREN)
        init = step = None
        if not self.at(TokenType.SEMI):
            init = self.single(self.parse_declaration() if self.at(TokenType.KW_INT) else self.parse_simple())
        self.expect(TokenType.SEMI)
        cond = self.parse_expression()
        self.expect(TokenType.SEMI)
        if not self.at(TokenType.RPAREN):
            step = self.single(self.parse_simple())
        self.expect(TokenType.RPAREN)
        sid = self.fresh_id(start)
        return For(init, cond, step, self.parse_body(), id=sid)

    def single(self, stmts: list[Stmt]) -> Stmt:
        if len(stmts) != 1 or isinstance(stmts[0], (Call, Havoc)):
            raise self.error("for clauses must be plain assignments or declarations")
        return stmts[0]

    # expressions

    def parse_expression(self, level: int = 0) -> Expr:
        if level == len(PRECEDENCE):
            return self.parse_unary()
        left = self.parse_expression(level + 1)
        while self.current_token.type in PRECEDENCE[level]:
            op = self.advance().value
            right = self.parse_expression(level + 1)
            left = Binary(op, left, right)
        return left

    def parse_unary(self) -> Expr:
        if self.at(TokenType.MINUS, TokenType.NOT):
            op = self.advance().value
            return Unary(op, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.current_token
        match token.type:
            case TokenType.INT:
                self.advance()
                return IntLit(token.value)
            case TokenType.KW_TRUE | TokenType.KW_FALSE:
                self.advance()
                return BoolLit(token.type == TokenType.KW_TRUE)
            case TokenType.LPAREN:
                self.advance()
                expr = self.parse_expression()
                self.expect(TokenType.RPAREN)
                return expr
            case TokenType.IDENT:
                self.advance()
                if token.value in self.constants:
                    return constant_literal(self.constants[token.value])
                if self.at(TokenType.LBRACKET):
                    self.advance()
                    index = self.parse_expression()
                    self.expect(TokenType.RBRACKET)
                    return Index(token.value, index)
                if self.at(TokenType.LPAREN):
                    raise self.error("calls are only allowed as statements or whole right-hand sides")
                return Var(token.value)
        found = token.value if token.type != TokenType.EOF else "end of input"
        raise self.error(f"unexpected {found!r}", expected="expression")


def constant_literal(value: int) -> Expr:
    if value < 0:
        return Unary("-", IntLit(-value))
    return IntLit(value)


def parse(source: str, path: Optional[str] = None, defines: Optional[Mapping[str, int]] = None) -> Program:
    """Parse mini-language source into a Program."""
    lexer = Lexer(source, path)
    tokens = lexer.tokenize()
    parser = Parser(tokens, path, defines)
    try:
        program = parser.parse()
    except RecursionError:
        raise parser.error("nesting too deep") from None
    logger.debug("parsed %s: %d functions, %d globals, %d statements",
                 path or "<input>", len(program.functions), len(program.globals), len(program.source_map))
    return program


def parse_file(filename: str | Path, defines: Optional[Mapping[str, int]] = None) -> Program:
    """Parse a `.imp` file into a Program."""
    path = Path(filename)
    return parse(path.read_text(encoding="utf-8"), str(path), defines)
