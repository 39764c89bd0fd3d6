class GeneratorClient(object):
    """
    Anything that turns a prompt into generator text.

    ``problem_id`` identifies the problem the prompt is for; clients that
    replay canned responses use it, network clients ignore it.
    """
    name = 'generator'

    def complete(self, prompt, problem_id=None):
        """
        :param prompt str: the full prompt
        :param problem_id str: the problem the prompt belongs to
        :returns: str
        """
        raise NotImplementedError()
