# MIT License
#
# Copyright (c) [2023] [son pham, tien nguyen, bach bao]
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


"""Run manifests written next to the primary output of every command"""
import platform

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from src import __version__
from src.constant import FileFormat
from src.utility import write_json


@dataclass
class RunManifest:
    """ Snapshot of one command line run

    Here is a list of available attributes of "RunManifest" class:
        * command: sub-command name
        * config: fully resolved configuration
        * inputs, outputs: role -> path
        * wall_times: stage -> seconds
        * version: package version
        * status: "ok" or "failed"
        * exit_code: process exit code of the run
        * error: kind and message of the error that ended a failed run
    """
    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    wall_times: Dict[str, float] = field(default_factory=dict)
    version: str = __version__
    status: str = "ok"
    exit_code: int = 0
    error: Optional[Dict[str, str]] = None

    @staticmethod
    def path_for(primary_output: str) -> str:
        return f"{primary_output.rstrip('/')}.manifest.json"

    def to_dict(self) -> Dict[str, Any]:
        return {"format": FileFormat.MANIFEST.value, "command": self.command, "config": self.config,
                "inputs": self.inputs, "outputs": self.outputs, "wall_times": self.wall_times,
                "version": self.version, "python": platform.python_version(), "status": self.status,
                "exit_code": self.exit_code, "error": self.error}

    def write(self, primary_output: str) -> str:
        path = self.path_for(primary_output)
        write_json(self.to_dict(), path, indent=True)
        return path
