# src/cli/__init__.py
from .commands import COMMANDS, CommandResult, EXIT_ERROR, EXIT_FAILED, EXIT_OK

__all__ = ['COMMANDS', 'CommandResult', 'EXIT_ERROR', 'EXIT_FAILED', 'EXIT_OK']
