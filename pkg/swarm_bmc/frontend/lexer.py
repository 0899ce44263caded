"""Lexical analysis for `.imp` sources."""

from enum import Enum
from typing import List, Optional

from swarm_bmc.errors import ParseError


class TokenType(Enum):
    """Token types of the mini-language"""
    INT = "INT"
    IDENT = "IDENT"
    STRING = "STRING"
    # keywords
    KW_INT = "int"
    KW_CONST = "const"
    KW_FUNC = "func"
    KW_GATE = "gate"
    KW_IF = "if"
    KW_ELSE = "else"
    KW_WHILE = "while"
    KW_FOR = "for"
    KW_RETURN = "return"
    KW_ASSERT = "assert"
    KW_ASSUME = "assume"
    KW_LOG = "log"
    KW_HAVOC = "havoc"
    KW_TRUE = "true"
    KW_FALSE = "false"
    # punctuation
    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    RBRACE = "}"
    LBRACKET = "["
    RBRACKET = "]"
    SEMI = ";"
    COMMA = ","
    ASSIGN = "="
    # operators
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    PERCENT = "%"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="
    AND = "&&"
    OR = "||"
    NOT = "!"
    EOF = "EOF"


KEYWORDS = {t.value: t for t in TokenType if t.name.startswith("KW_")}

# longest match first
OPERATORS = sorted(
    ((t.value, t) for t in TokenType
     if not t.name.startswith("KW_") and t not in (TokenType.INT, TokenType.IDENT,
                                                   TokenType.STRING, TokenType.EOF)),
    key=lambda pair: -len(pair[0]),
)


class Token:
    """A token with its type, value and source position"""
    def __init__(self, type_: TokenType, value, line: int, column: int):
        self.type = type_
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"Token({self.type}, {self.value!r}, {self.line}:{self.column})"


class Lexer:
    """Turns source text into a list of tokens, tracking line and column"""
    def __init__(self, text: str, path: Optional[str] = None):
        self.text = text
        self.path = path
        self.position = 0
        self.line = 1
        self.column = 1
        self.current_char = self.text[0] if self.text else None

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.column, path=self.path)

    def advance(self):
        """Move to next character in input"""
        if self.current_char == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        self.position += 1
        self.current_char = self.text[self.position] if self.position < len(self.text) else None

    def peek(self) -> Optional[str]:
        nxt = self.position + 1
        return self.text[nxt] if nxt < len(self.text) else None

    def skip_whitespace_and_comments(self):
        while self.current_char is not None:
            if self.current_char.isspace():
                self.advance()
            elif self.current_char == "/" and self.peek() == "/":
                while self.current_char is not None and self.current_char != "\n":
                    self.advance()
            else:
                return

    def read_number(self) -> Token:
        line, column = self.line, self.column
        digits = ""
        while self.current_char is not None and self.current_char.isascii() and self.current_char.isdigit():
            digits += self.current_char
            self.advance()
        if self.current_char is not None and (self.current_char.isalpha() or self.current_char == "_"):
            raise self.error(f"malformed number '{digits}{self.current_char}'")
        return Token(TokenType.INT, int(digits), line, column)

    def read_word(self) -> Token:
        line, column = self.line, self.column
        word = ""
        while self.current_char is not None and self.current_char.isascii() and (
                self.current_char.isalnum() or self.current_char == "_"):
            word += self.current_char
            self.advance()
        if word in KEYWORDS:
            return Token(KEYWORDS[word], word, line, column)
        return Token(TokenType.IDENT, word, line, column)

    def read_string(self) -> Token:
        line, column = self.line, self.column
        self.advance()
        chars = []
        while True:
            if self.current_char is None or self.current_char == "\n":
                raise ParseError("unterminated string literal", line, column, path=self.path)
            if self.current_char == '"':
                self.advance()
                return Token(TokenType.STRING, "".join(chars), line, column)
            if self.current_char == "\\":
                self.advance()
                if self.current_char not in ('"', "\\"):
                    raise self.error("unsupported escape sequence")
            chars.append(self.current_char)
            self.advance()

    def get_next_token(self) -> Token:
        """Get next token from input"""
        self.skip_whitespace_and_comments()
        if self.current_char is None:
            return Token(TokenType.EOF, None, self.line, self.column)

        char = self.current_char
        if char.isascii() and char.isdigit():
            return self.read_number()
        if char.isascii() and (char.isalpha() or char == "_"):
            return self.read_word()
        if char == '"':
            return self.read_string()

        for text, type_ in OPERATORS:
            if self.text.startswith(text, self.position):
                token = Token(type_, text, self.line, self.column)
                for _ in text:
                    self.advance()
                return token

        raise self.error(f"invalid character {char!r}")

    def tokenize(self) -> List[Token]:
        """Tokenize entire input string"""
        tokens = []
        while True:
            token = self.get_next_token()
            tokens.append(token)
            if token.type == TokenType.EOF:
                break
        return tokens
