"""
Pipeline Commands Registry

Maps subcommand names of pipeline.py to their handlers.
Add new subcommands here and in pipeline.py's parser.
"""

from .commands import (
    COMMANDS,
    EXPORTS,
    cmd_bench,
    cmd_evaluate,
    cmd_export,
    cmd_generate,
    cmd_train,
    list_exports,
)
from .outputs import OUTPUT_DIRS, output_dir, read_manifest, write_manifest


def get_command(name: str):
    """Get command handler by name"""
    if name not in COMMANDS:
        available = ', '.join(COMMANDS.keys())
        raise ValueError(f"Unknown command: '{name}'. Available: {available}")
    return COMMANDS[name]


def list_commands():
    """List available subcommands"""
    return list(COMMANDS.keys())


__all__ = [
    'COMMANDS',
    'EXPORTS',
    'get_command',
    'list_commands',
    'list_exports',
    'cmd_generate',
    'cmd_train',
    'cmd_evaluate',
    'cmd_bench',
    'cmd_export',
    'OUTPUT_DIRS',
    'output_dir',
    'read_manifest',
    'write_manifest',
]
