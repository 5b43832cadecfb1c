# eval package
