# focklib - Extensions

from .docparser import DocParser
