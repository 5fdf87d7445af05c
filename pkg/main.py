"""fockop - composition operators on the Segal-Bargmann space
README  : ./readme.md
"""

from os.path import join
from sys import argv, exit

import focklib

from data import data, ROOT


toolkit = focklib.Toolkit(data["name"], config=data)
# cogsフォルダにあるエクステンションを読み込む。
toolkit.load_cogs(join(ROOT, "cogs"))


if __name__ == "__main__":
    exit(toolkit.run(argv[1:]))
