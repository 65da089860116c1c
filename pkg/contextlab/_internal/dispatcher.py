"""Signal/receiver plumbing used to report verification progress."""


class Event(object):
    def __init__(self, name='anonymous'):
        self.name = name

    def __repr__(self):
        return self.__str__()

    def __str__(self):
        return '%s::%s' % (self.__class__.__name__, self.name)

    def getname(self):
        return self.name


class signal(object):
    All = Event('*')


class Dispatcher(object):
    """
    Holds receivers per signal. One instance per run, so that two verification
    runs in different threads never see each other's receivers.
    """

    def __init__(self):
        self.signals = {}

    def connect(self, receiver, sig=signal.All):
        if sig in self.signals:
            receivers = self.signals[sig]
        else:
            receivers = self.signals[sig] = []
        receivers.append(receiver)

    def disconnect(self, receiver, sig=signal.All):
        if sig is signal.All:
            for s in self.signals:
                if receiver in self.signals[s]:
                    self.signals[s].remove(receiver)
        elif sig in self.signals:
            if receiver in self.signals[sig]:
                self.signals[sig].remove(receiver)

    def send(self, sig, **named):
        receivers = list(self.signals.get(sig, []))
        if sig is not signal.All:
            receivers += self.signals.get(signal.All, [])
        for receiver in receivers:
            receiver(event=sig, **named)


if __name__ == '__main__':
    def handler0(event, sender, **args):
        recvs.append(0)
        print('handler0: event=%s sender=%s' % (str(event), str(sender)))

    def handler1(event, sender, **args):
        recvs.append(1)
        print('handler1: event=%s sender=%s' % (str(event), str(sender)))

    test_signal0 = Event('test signal0')
    test_signal1 = Event('test signal1')
    d = Dispatcher()
    d.connect(handler0, signal.All)
    d.connect(handler1, test_signal0)

    recvs = []
    d.send(test_signal0, sender=None)
    assert len(recvs) == 2 and 0 in recvs and 1 in recvs

    recvs = []
    d.send(test_signal1, sender=None, data='test data')
    assert len(recvs) == 1 and 0 in recvs

    d.disconnect(handler1)

    recvs = []
    d.send(test_signal0, sender=None, arg0=0)
    assert len(recvs) == 1 and 0 in recvs
