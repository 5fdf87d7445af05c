# fockutil
