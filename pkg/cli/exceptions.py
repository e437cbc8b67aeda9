class FileFormatError(Exception):
    """Document illisible, mal formé ou d'un type inattendu."""

    def __init__(self, path, detail):
        self.path = str(path)
        self.detail = detail
        super().__init__(f"{self.path} : {detail}")
