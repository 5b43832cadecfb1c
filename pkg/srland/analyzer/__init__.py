# analyzer package
