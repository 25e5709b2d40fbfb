"""Safra-style token ring termination detection.

Each worker keeps a colour and a message balance (batches sent minus
batches received). Worker 0 launches a white token around the ring
0 -> 1 -> ... -> k-1 -> 0; passive workers add their balance and blacken
the token if they received anything since their last forward.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

WHITE = "WHITE"
BLACK = "BLACK"


class Status(enum.Enum):
    QUIESCENT = "QUIESCENT"
    ACTIVE = "ACTIVE"


@dataclass(frozen=True)
class Token:
    color: str = WHITE
    count: int = 0


class SafraState:
    __slots__ = ("wid", "k", "color", "balance")

    def __init__(self, wid: int, k: int):
        self.wid = wid
        self.k = k
        self.color = WHITE
        self.balance = 0

    def reset(self) -> None:
        self.color = WHITE
        self.balance = 0

    def on_send(self) -> None:
        self.balance += 1

    def on_receive(self) -> None:
        self.balance -= 1
        self.color = BLACK

    @property
    def next(self) -> int:
        return (self.wid + 1) % self.k

    def initiate(self) -> Token:
        assert self.wid == 0
        self.color = WHITE
        return Token(WHITE, 0)

    def forward(self, token: Token) -> Token:
        color = BLACK if self.color == BLACK else token.color
        self.color = WHITE
        return Token(color, token.count + self.balance)

    def decide(self, token: Token) -> Status:
        """Worker 0's verdict on a token that completed the ring."""
        return detect_termination(token, self)


def detect_termination(token: Token, root: SafraState) -> Status:
    if token.color == WHITE and root.color == WHITE and token.count + root.balance == 0:
        return Status.QUIESCENT
    return Status.ACTIVE
